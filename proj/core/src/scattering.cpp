#include "pmesim/scattering.hpp"

#include <cmath>

namespace pmesim {

using namespace std::complex_literals;

namespace {

double sq(double x) { return x * x; }
double msq(const std::complex<double>& z) { return std::norm(z); }

} // namespace

std::array<double, 6> ScatteringMatrix::bogoliubov_residuals() const {
    const auto& T = t;
    std::array<double, 6> r{};
    // rows
    r[0] = msq(T(0, 0)) - msq(T(0, 1)) - msq(T(0, 2)) - 1.0;
    r[1] = msq(T(1, 1)) + msq(T(1, 2)) - msq(T(1, 0)) - 1.0;
    r[2] = msq(T(2, 2)) + msq(T(2, 1)) - msq(T(2, 0)) - 1.0;
    // columns
    r[3] = msq(T(0, 0)) - msq(T(1, 0)) - msq(T(2, 0)) - 1.0;
    r[4] = msq(T(1, 1)) + msq(T(2, 1)) - msq(T(0, 1)) - 1.0;
    r[5] = msq(T(2, 2)) + msq(T(1, 2)) - msq(T(0, 2)) - 1.0;
    return r;
}

std::array<double, 2> ScatteringMatrix::cross_identity_residuals() const {
    const auto& T = t;
    const std::complex<double> s =
        std::conj(T(0, 0)) * T(1, 0) - T(1, 1) * std::conj(T(0, 1)) -
        T(1, 2) * std::conj(T(0, 2));
    const std::complex<double> m =
        std::conj(T(0, 0)) * T(2, 0) - T(2, 1) * std::conj(T(0, 1)) -
        T(2, 2) * std::conj(T(0, 2));
    return {std::abs(s), std::abs(m)};
}

double ScatteringMatrix::max_residual() const {
    double worst = 0.0;
    for (double r : bogoliubov_residuals()) worst = std::max(worst, std::abs(r));
    for (double r : cross_identity_residuals()) worst = std::max(worst, r);
    return worst;
}

ScatteringMatrix scattering_matrix(const SystemParams& params, double omega) {
    require_below_threshold(params);

    const double kappa = params.kappa;
    const double lambda = params.lambda;
    const SpectralDensity rho = params.spectral_density();

    const std::complex<double> chi_i = 1.0 / (-1i * omega + kappa / 2.0);
    const std::complex<double> sigma = memory_self_energy(omega, params.g_coll, rho);
    const std::complex<double> chi_s = 1.0 / (-1i * omega + kappa / 2.0 + sigma);
    const std::complex<double> d = 1.0 - lambda * lambda * chi_s * chi_i;
    const double kappa_m = 2.0 * sigma.real();

    ScatteringMatrix out;
    out.omega = omega;
    out.kappa = kappa;
    out.kappa_m = kappa_m;

    if (kappa_m == 0.0) {
        // Decoupled memory (G = 0): memory row/column are the identity, and
        // the photonic sector is the bare non-degenerate parametric cavity.
        out.t.setZero();
        out.t(0, 0) = kappa * chi_i / d - 1.0;
        out.t(0, 1) = 1i * lambda * kappa * chi_s * chi_i / d;
        out.t(1, 0) = -1i * lambda * kappa * chi_s * chi_i / d;
        out.t(1, 1) = kappa * chi_s / d - 1.0;
        out.t(2, 2) = 1.0;
        return out;
    }

    const double skm = std::sqrt(kappa * kappa_m);
    const std::complex<double> pair = 1i * lambda * chi_s * chi_i / d;

    out.t(0, 0) = kappa * chi_i / d - 1.0;
    out.t(0, 1) = kappa * pair;
    out.t(0, 2) = skm * pair;
    out.t(1, 0) = -kappa * pair;
    out.t(1, 1) = kappa * chi_s / d - 1.0;
    out.t(1, 2) = skm * chi_s / d;
    out.t(2, 0) = -skm * pair;
    out.t(2, 1) = skm * chi_s / d;
    out.t(2, 2) = kappa_m * chi_s / d - 1.0;
    return out;
}

CircuitDecomposition decompose_circuit(const ScatteringMatrix& T) {
    const double tii = std::abs(T.t(0, 0));
    if (tii < 1.0 - 1e-9)
        throw InvariantViolation("|T_II| = " + std::to_string(tii) +
                                 " < 1; scattering matrix is not a valid "
                                 "Bogoliubov transformation");
    CircuitDecomposition c;
    c.r = std::acosh(std::max(tii, 1.0));

    const double t_is = std::abs(T.t(0, 1));
    const double t_im = std::abs(T.t(0, 2));
    const double t_si = std::abs(T.t(1, 0));
    const double t_mi = std::abs(T.t(2, 0));
    // lambda = 0 leaves both ratios 0/0; the analytic limit is the bare
    // memory-port mixing angle.
    const double limit_tan = std::sqrt(T.kappa_m / T.kappa);
    c.theta1 = (t_is > 0.0) ? std::atan2(t_im, t_is) : std::atan(limit_tan);
    c.theta2 = (t_si > 0.0) ? std::atan2(t_mi, t_si) : std::atan(limit_tan);
    return c;
}

double beam_splitter_angle_sq(const SystemParams& params, double omega) {
    params.validate();
    const double c = params.cooperativity_eff();
    return c / (1.0 + 4.0 * sq(omega) / sq(params.gamma_inh));
}

} // namespace pmesim
