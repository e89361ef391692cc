#include "pmesim/metrics.hpp"

#include <array>
#include <cmath>

namespace pmesim {

namespace {

constexpr std::array<int, 2> modes_im{0, 2};
constexpr std::array<int, 1> modes_m{2};

struct Occupations {
    double n_idler;
    double n_signal;
    double n_memory;
};

Occupations occupations(const ScatteringMatrix& T) {
    return {std::norm(T.t(0, 1)) + std::norm(T.t(0, 2)),
            std::norm(T.t(1, 0)), std::norm(T.t(2, 0))};
}

// Quadrature scale and near-threshold focus shared by all the improper
// integrals; integrands decay as 1/w^4 and are smooth.
RealLineOptions line_options(const SystemParams& p, double rel_tol) {
    RealLineOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 1e-12 * p.kappa;
    const double lam_crit =
        (p.kappa / 2.0) * std::sqrt(1.0 + p.cooperativity_eff());
    if (p.lambda > 0.99 * lam_crit)
        opt.focus_halfwidth = 10.0 * (lam_crit - p.lambda);
    return opt;
}

double quad_scale(const SystemParams& p) {
    return std::max(p.kappa, p.gamma_inh);
}

RateResult check_converged(const QuadratureResult& q, const char* what) {
    if (!q.converged)
        throw NumericError(std::string(what) +
                           " quadrature did not converge (estimated error " +
                           std::to_string(q.error) + " after " +
                           std::to_string(q.evaluations) + " evaluations)");
    return {q.value, q.error, q.evaluations};
}

} // namespace

std::string to_string(EntanglementKind k) {
    return k == EntanglementKind::IdlerMemory ? "idler_memory" : "memory_vs_both";
}

double ef_at(const SystemParams& params, double omega, EntanglementKind which) {
    if (params.lambda == 0.0) return 0.0;
    const ScatteringMatrix T = scattering_matrix(params, omega);
    const CovarianceMatrix cov = covariance_from_scattering(T);
    if (which == EntanglementKind::MemoryVsBoth) {
        const CovarianceMatrix mem = reduce(cov, modes_m);
        double s = 0.0;
        for (double nu : symplectic_eigenvalues(mem)) s += entropy_g(nu);
        return s;
    }
    return eof_two_mode(reduce(cov, modes_im)).ebits;
}

EntanglementSpectrum ef_spectrum(const SystemParams& params,
                                 std::span<const double> omega_grid) {
    require_below_threshold(params);
    EntanglementSpectrum sp;
    sp.omegas.assign(omega_grid.begin(), omega_grid.end());
    sp.ef_idler_memory.reserve(omega_grid.size());
    sp.ef_memory_vs_both.reserve(omega_grid.size());
    sp.n_idler.reserve(omega_grid.size());
    sp.n_memory.reserve(omega_grid.size());
    for (double w : omega_grid) {
        const ScatteringMatrix T = scattering_matrix(params, w);
        const auto occ = occupations(T);
        sp.n_idler.push_back(occ.n_idler);
        sp.n_memory.push_back(occ.n_memory);
        if (params.lambda == 0.0) {
            sp.ef_idler_memory.push_back(0.0);
            sp.ef_memory_vs_both.push_back(0.0);
            continue;
        }
        const CovarianceMatrix cov = covariance_from_scattering(T);
        sp.ef_idler_memory.push_back(eof_two_mode(reduce(cov, modes_im)).ebits);
        double s = 0.0;
        for (double nu : symplectic_eigenvalues(reduce(cov, modes_m)))
            s += entropy_g(nu);
        sp.ef_memory_vs_both.push_back(s);
    }
    return sp;
}

RateResult entanglement_rate(const SystemParams& params, EntanglementKind which,
                             double rel_tol) {
    require_below_threshold(params);
    if (params.lambda == 0.0) return {0.0, 0.0, 0};
    const auto q = integrate_real_line(
        [&](double w) { return ef_at(params, w, which); }, quad_scale(params),
        line_options(params, rel_tol));
    RateResult r = check_converged(q, "entanglement rate");
    r.value /= two_pi;
    r.quad_error /= two_pi;
    return r;
}

HeraldingResult heralding_efficiency(const SystemParams& params, double rel_tol) {
    require_below_threshold(params);
    if (params.lambda == 0.0)
        throw DomainError("heralding efficiency is 0/0 at lambda = 0; "
                          "use the weak-drive limit");
    if (params.g_coll == 0.0) return {0.0, true};

    const double alpha = quad_scale(params);
    const auto opt = line_options(params, rel_tol);
    const auto num = integrate_real_line(
        [&](double w) {
            const double n = occupations(scattering_matrix(params, w)).n_memory;
            return n / (1.0 + n);
        },
        alpha, opt);
    const auto den = integrate_real_line(
        [&](double w) {
            const double n = occupations(scattering_matrix(params, w)).n_idler;
            return n / (1.0 + n);
        },
        alpha, opt);
    check_converged(num, "heralding numerator");
    check_converged(den, "heralding denominator");
    return {num.value / den.value, false};
}

double heralding_efficiency_weak_drive_limit(const SystemParams& params,
                                             double rel_tol) {
    params.validate();
    if (params.g_coll == 0.0) return 0.0;
    // n_M -> lambda^2 kappa kappa_M |chi_S chi_I|^2 and
    // n_I -> lambda^2 kappa (kappa + kappa_M) |chi_S chi_I|^2 as lambda -> 0;
    // the lambda^2 kappa |chi_S chi_I|^2 factor cancels inside the ratio.
    const SpectralDensity rho = params.spectral_density();
    auto weight = [&](double w) {
        using namespace std::complex_literals;
        const std::complex<double> chi_i = 1.0 / (-1i * w + params.kappa / 2.0);
        const std::complex<double> sigma = memory_self_energy(w, params.g_coll, rho);
        const std::complex<double> chi_s =
            1.0 / (-1i * w + params.kappa / 2.0 + sigma);
        return std::norm(chi_s * chi_i);
    };
    const double alpha = quad_scale(params);
    RealLineOptions opt;
    opt.rel_tol = rel_tol;
    const auto num = integrate_real_line(
        [&](double w) {
            return memory_port_rate(w, params.g_coll, rho) * weight(w);
        },
        alpha, opt);
    const auto den = integrate_real_line(
        [&](double w) {
            return (params.kappa + memory_port_rate(w, params.g_coll, rho)) *
                   weight(w);
        },
        alpha, opt);
    check_converged(num, "weak-drive heralding numerator");
    check_converged(den, "weak-drive heralding denominator");
    return num.value / den.value;
}

RateResult photon_flux(const SystemParams& params, OutputMode which,
                       double rel_tol) {
    require_below_threshold(params);
    if (params.lambda == 0.0) return {0.0, 0.0, 0};
    const auto q = integrate_real_line(
        [&](double w) {
            const auto occ = occupations(scattering_matrix(params, w));
            switch (which) {
                case OutputMode::Idler: return occ.n_idler;
                case OutputMode::Signal: return occ.n_signal;
                default: return occ.n_memory;
            }
        },
        quad_scale(params), line_options(params, rel_tol));
    RateResult r = check_converged(q, "photon flux");
    r.value /= two_pi;
    r.quad_error /= two_pi;
    return r;
}

} // namespace pmesim
