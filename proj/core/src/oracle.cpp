#include "pmesim/oracle.hpp"

#include <cmath>
#include <complex>

namespace pmesim {

using namespace std::complex_literals;

namespace {

std::vector<double> eps_schedule(const SystemParams& params, const OracleConfig& cfg) {
    const double spacing =
        2.0 * cfg.window_factor * params.gamma_inh / cfg.n_memory_modes;
    const double base = cfg.eps_factor * spacing;
    // Levels move upward from the base so every level stays above the level
    // spacing (below it, discreteness noise dominates and extrapolation
    // amplifies it).
    std::vector<double> eps;
    for (int j = cfg.extrapolation_levels - 1; j >= 0; --j) {
        double e = base * (1.0 + 0.5 * j);
        if (cfg.narrow_bath) e = std::min(e, params.gamma_inh / 4.0);
        if (eps.empty() || e < eps.back()) eps.push_back(e);
    }
    return eps; // descending
}

// Neville polynomial extrapolation of tabulated values to eps = 0.
template <class V>
V extrapolate_to_zero(std::vector<V> vals, const std::vector<double>& eps) {
    const int n = static_cast<int>(vals.size());
    for (int j = 1; j < n; ++j)
        for (int i = n - 1; i >= j; --i)
            vals[i] = vals[i] + (vals[i] - vals[i - 1]) * (0.0 - eps[i]) /
                                    (eps[i] - eps[i - j]);
    return vals[n - 1];
}

struct SolveResult {
    std::complex<double> idler_out;  // b_I^dag amplitude
    std::complex<double> signal_out; // b_S amplitude
    double memory_out_sq;            // total flux in the memory ports
};

class DiscreteSolver {
public:
    DiscreteSolver(const DiscretizedModel& m, double omega)
        : model_(m), omega_(omega) {
        const int n = static_cast<int>(m.mode_freqs.size()) + 2;
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
        a(0, 0) = -1i * omega + m.kappa / 2.0;
        a(0, 1) = 1i * m.lambda;
        a(1, 0) = -1i * m.lambda;
        a(1, 1) = -1i * omega + m.kappa / 2.0;
        for (size_t k = 0; k < m.mode_freqs.size(); ++k) {
            const auto kk = static_cast<int>(k) + 2;
            a(0, kk) = 1i * m.couplings[k];
            a(kk, 0) = 1i * m.couplings[k];
            a(kk, kk) = -1i * omega + m.epsilon + 1i * m.mode_freqs[k];
        }
        lu_.compute(a);
    }

    // rhs has entries (signal drive, idler drive, memory drives...)
    SolveResult solve(const Eigen::VectorXcd& rhs,
                      const Eigen::VectorXcd& mem_in) const {
        const Eigen::VectorXcd x = lu_.solve(rhs);
        SolveResult r;
        const double sk = std::sqrt(model_.kappa);
        r.signal_out = sk * x(0) - rhs_sig_;
        r.idler_out = sk * x(1) - rhs_idl_;
        const double s2e = std::sqrt(2.0 * model_.epsilon);
        double acc = 0.0;
        for (int k = 0; k < mem_in.size(); ++k)
            acc += std::norm(s2e * x(k + 2) - mem_in(k));
        r.memory_out_sq = acc;
        return r;
    }

    void set_input_amplitudes(std::complex<double> sig, std::complex<double> idl) {
        rhs_sig_ = sig;
        rhs_idl_ = idl;
    }

private:
    const DiscretizedModel& model_;
    double omega_;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
    std::complex<double> rhs_sig_ = 0.0;
    std::complex<double> rhs_idl_ = 0.0;
};

Eigen::Matrix3d solve_t2_at_eps(const DiscretizedModel& m, double omega) {
    const int nm = static_cast<int>(m.mode_freqs.size());
    const int n = nm + 2;

    // A probe colliding with an undamped pole would make the steady state
    // singular; with finite damping this is only a conditioning guard.
    double probe = omega;
    if (m.epsilon <= 0.0) {
        for (double wk : m.mode_freqs)
            if (std::abs(wk - probe) < 1e-12 * std::max(1.0, std::abs(wk)))
                probe += m.spacing / 2.0;
    }

    DiscreteSolver solver(m, probe);
    Eigen::Matrix3d t2 = Eigen::Matrix3d::Zero();
    const double sk = std::sqrt(m.kappa);
    const double s2e = std::sqrt(2.0 * m.epsilon);
    const Eigen::VectorXcd no_mem = Eigen::VectorXcd::Zero(nm);

    // Idler-conjugate drive.
    {
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs(1) = sk;
        solver.set_input_amplitudes(0.0, 1.0);
        const auto r = solver.solve(rhs, no_mem);
        t2(0, 0) = std::norm(r.idler_out);
        t2(1, 0) = std::norm(r.signal_out);
        t2(2, 0) = r.memory_out_sq;
    }
    // Signal drive.
    {
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs(0) = sk;
        solver.set_input_amplitudes(1.0, 0.0);
        const auto r = solver.solve(rhs, no_mem);
        t2(0, 1) = std::norm(r.idler_out);
        t2(1, 1) = std::norm(r.signal_out);
        t2(2, 1) = r.memory_out_sq;
    }
    // Collective memory drive: unit coherent excitation of the sqrt(rho)-
    // weighted combination the signal mode actually couples to.  With the
    // memory decoupled (G = 0) that combination is undefined and the memory
    // column is exactly the identity.
    if (m.coupling_weight_sq() == 0.0) {
        t2(2, 2) = 1.0;
        return t2;
    }
    {
        Eigen::VectorXcd mu(nm);
        for (int k = 0; k < nm; ++k)
            mu(k) = -1i * m.couplings[k] * s2e /
                    std::complex<double>(m.epsilon, m.mode_freqs[k] - probe);
        const Eigen::VectorXcd d = mu.conjugate() / mu.norm();
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs.tail(nm) = s2e * d;
        solver.set_input_amplitudes(0.0, 0.0);
        const auto r = solver.solve(rhs, d);
        t2(0, 2) = std::norm(r.idler_out);
        t2(1, 2) = std::norm(r.signal_out);
        t2(2, 2) = r.memory_out_sq;
    }
    return t2;
}

} // namespace

void OracleConfig::validate(const SystemParams& params) const {
    params.validate();
    if (n_memory_modes < 10)
        throw DomainError("oracle needs at least 10 memory modes");
    if (window_factor < 5.0)
        throw DomainError("oracle window must span at least 5 Gamma");
    if (eps_factor <= 0.0)
        throw DomainError("oracle regularization must be positive");
    if (extrapolation_levels < 1)
        throw DomainError("oracle needs at least one epsilon level");
    const double spacing =
        2.0 * window_factor * params.gamma_inh / n_memory_modes;
    if (spacing > params.kappa / 10.0)
        throw DomainError("memory-mode spacing must resolve the cavity "
                          "linewidth (d_omega <= kappa/10)");
    // Lorentzian mass outside the window.  The normalized tails fall off as
    // Gamma/(pi W); reject windows that drop more than the coarsest
    // refinement level tolerates (W just under 5 Gamma).
    const double tail =
        1.0 - (2.0 / std::numbers::pi) * std::atan(2.0 * window_factor);
    if (tail > 0.07)
        throw DomainError("oracle window too small relative to Gamma "
                          "(tail mass " + std::to_string(tail) + ")");
}

double DiscretizedModel::coupling_weight_sq() const {
    double s = 0.0;
    for (double g : couplings) s += g * g;
    return s;
}

DiscretizedModel build_discretized_model(const SystemParams& params,
                                         const OracleConfig& cfg, double epsilon) {
    cfg.validate(params);
    if (!(epsilon > 0.0)) throw DomainError("oracle damping must be positive");

    DiscretizedModel m;
    const double w = cfg.window_factor * params.gamma_inh;
    const int n = cfg.n_memory_modes;
    m.spacing = 2.0 * w / n;
    m.epsilon = epsilon;
    m.kappa = params.kappa;
    m.lambda = params.lambda;
    m.mode_freqs.resize(n);
    m.couplings.resize(n);

    double gamma_bath = params.gamma_inh;
    if (cfg.narrow_bath) {
        gamma_bath -= 2.0 * epsilon;
        if (!(gamma_bath > 0.0))
            throw DomainError("oracle damping too large for bath narrowing "
                              "(needs eps < Gamma/2)");
    }
    const double g_eff = params.g_eff();
    for (int k = 0; k < n; ++k) {
        // Midpoint placement keeps probes off the undamped poles.
        m.mode_freqs[k] = -w + (k + 0.5) * m.spacing;
        m.couplings[k] =
            g_eff * std::sqrt(lorentzian_density(m.mode_freqs[k], gamma_bath) *
                              m.spacing);
    }
    return m;
}

OracleScattering linear_response_scattering(const SystemParams& params,
                                            double omega, const OracleConfig& cfg) {
    require_below_threshold(params);
    OracleScattering out;
    out.omega = omega;
    out.eps_schedule = eps_schedule(params, cfg);
    for (double e : out.eps_schedule) {
        const DiscretizedModel m = build_discretized_model(params, cfg, e);
        out.per_eps.push_back(solve_t2_at_eps(m, omega));
    }
    out.t2 = (out.per_eps.size() > 1)
                 ? extrapolate_to_zero(out.per_eps, out.eps_schedule)
                 : out.per_eps.front();
    return out;
}

CovarianceMatrix oracle_covariance_im(const OracleScattering& s) {
    const double n_i = s.t2(0, 1) + s.t2(0, 2);
    const double n_m = s.t2(2, 0);
    // |<a_I a_M>| = |T_II| |T_MI|; the relative phase is a port convention,
    // so the correlation is placed on the x-x / p-p diagonal.
    const double c = 2.0 * std::sqrt(std::max(s.t2(0, 0) * s.t2(2, 0), 0.0));
    Eigen::Matrix4d sig = Eigen::Matrix4d::Identity();
    sig(0, 0) = sig(1, 1) = 2.0 * n_i + 1.0;
    sig(2, 2) = sig(3, 3) = 2.0 * n_m + 1.0;
    sig(0, 2) = sig(2, 0) = c;
    sig(1, 3) = sig(3, 1) = -c;
    return CovarianceMatrix(2, sig);
}

std::complex<double> oracle_self_energy(const SystemParams& params, double omega,
                                        const OracleConfig& cfg) {
    const auto eps = eps_schedule(params, cfg);
    std::vector<Eigen::Vector2d> vals;
    for (double e : eps) {
        const DiscretizedModel m = build_discretized_model(params, cfg, e);
        std::complex<double> s = 0.0;
        for (size_t k = 0; k < m.mode_freqs.size(); ++k)
            s += m.couplings[k] * m.couplings[k] /
                 std::complex<double>(e, m.mode_freqs[k] - omega);
        vals.emplace_back(s.real(), s.imag());
    }
    const Eigen::Vector2d r = (vals.size() > 1)
                                  ? extrapolate_to_zero(vals, eps)
                                  : vals.front();
    return {r(0), r(1)};
}

} // namespace pmesim
