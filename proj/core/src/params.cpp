#include "pmesim/params.hpp"

#include <algorithm>
#include <cmath>

namespace pmesim {

namespace {

// D(w) = 1 - lambda^2 chi_S(w) chi_I(w) with the -i w convention.
std::complex<double> scattering_denominator(const SystemParams& p, double omega,
                                            double lambda) {
    using namespace std::complex_literals;
    const std::complex<double> chi_i = 1.0 / (-1i * omega + p.kappa / 2.0);
    const std::complex<double> sigma =
        memory_self_energy(omega, p.g_coll, p.spectral_density());
    const std::complex<double> chi_s = 1.0 / (-1i * omega + p.kappa / 2.0 + sigma);
    return 1.0 - lambda * lambda * chi_s * chi_i;
}

} // namespace

AfcParams AfcParams::from_finesse(double finesse, double comb_spacing,
                                  UnitsConvention conv) {
    AfcParams afc;
    afc.finesse = finesse;
    afc.comb_spacing = comb_spacing;
    afc.tooth_width = comb_spacing / finesse;
    // T_M = 1/Delta with Delta in the convention the comb was quoted in.
    afc.storage_time = (conv == UnitsConvention::Ordinary)
                           ? two_pi / comb_spacing
                           : 1.0 / comb_spacing;
    afc.validate();
    return afc;
}

void AfcParams::validate() const {
    if (!(finesse >= 1.0))
        throw DomainError("AFC finesse must be >= 1, got " + std::to_string(finesse));
    if (!(comb_spacing > 0.0))
        throw DomainError("AFC comb spacing must be positive");
    if (!(tooth_width > 0.0))
        throw DomainError("AFC tooth width must be positive");
    const double f = comb_spacing / tooth_width;
    if (std::abs(f - finesse) > 1e-12 * finesse)
        throw DomainError("AFC finesse inconsistent with comb_spacing/tooth_width");
    // storage_time must match either frequency convention for T_M = 1/Delta.
    const double t_ord = two_pi / comb_spacing;
    const double t_ang = 1.0 / comb_spacing;
    if (storage_time > 0.0 &&
        std::abs(storage_time - t_ord) > 1e-9 * t_ord &&
        std::abs(storage_time - t_ang) > 1e-9 * t_ang)
        throw DomainError("AFC storage time inconsistent with T_M = 1/Delta");
}

double lorentzian_density(double omega, double gamma_inh) {
    if (!(gamma_inh > 0.0))
        throw DomainError("Lorentzian linewidth must be positive");
    const double half = gamma_inh / 2.0;
    return (1.0 / two_pi) * gamma_inh / (omega * omega + half * half);
}

void SpectralDensity::validate() const {
    if (!(gamma_inh > 0.0))
        throw DomainError("spectral density linewidth must be positive");
    if (!(density_scale > 0.0))
        throw DomainError("spectral density scale must be positive");
}

std::complex<double> memory_self_energy(double omega, double g_coll,
                                        const SpectralDensity& density) {
    density.validate();
    const double g2 = density.density_scale * g_coll * g_coll;
    return g2 / std::complex<double>(density.gamma_inh / 2.0, -omega);
}

double memory_port_rate(double omega, double g_coll, const SpectralDensity& density) {
    return 2.0 * memory_self_energy(omega, g_coll, density).real();
}

void SystemParams::validate() const {
    if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
    if (!(gamma_inh > 0.0)) throw DomainError("gamma_inh must be positive");
    if (!(g_coll >= 0.0)) throw DomainError("g_coll must be non-negative");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
    if (memory_model == MemoryModel::AfcModified) {
        if (!afc) throw DomainError("AFC-modified memory model requires afc parameters");
        afc->validate();
    }
}

double SystemParams::density_scale() const {
    if (memory_model == MemoryModel::AfcModified && afc) return 1.0 / afc->finesse;
    return 1.0;
}

double SystemParams::g_eff() const { return g_coll * std::sqrt(density_scale()); }

double SystemParams::g2_eff() const { return g_coll * g_coll * density_scale(); }

double SystemParams::cooperativity() const {
    return 4.0 * g_coll * g_coll / (kappa * gamma_inh);
}

double SystemParams::cooperativity_eff() const {
    return 4.0 * g2_eff() / (kappa * gamma_inh);
}

SpectralDensity SystemParams::spectral_density() const {
    SpectralDensity d;
    d.kind = (memory_model == MemoryModel::AfcModified)
                 ? SpectralDensity::Kind::AfcEffective
                 : SpectralDensity::Kind::Lorentzian;
    d.gamma_inh = gamma_inh;
    d.density_scale = density_scale();
    return d;
}

SystemParams afc_effective_params(const SystemParams& params, const AfcParams& afc) {
    afc.validate();
    SystemParams p = params;
    p.memory_model = MemoryModel::AfcModified;
    p.afc = afc;
    p.validate();
    return p;
}

double stability_threshold(const SystemParams& params) {
    params.validate();
    const double lam_crit =
        (params.kappa / 2.0) * std::sqrt(1.0 + params.cooperativity_eff());

    // Verify the first real-w zero of D sits on resonance: scan |D(w)| at
    // lambda = lam_crit and refine the minimum locally.  The resonance dip
    // can be much narrower than the scan step, so the refinement re-scans
    // shrinking brackets instead of assuming unimodality.
    const double wmax = 20.0 * std::max(params.kappa, params.gamma_inh);
    constexpr int n_scan = 4001;
    double best_w = 0.0;
    double best_abs = std::abs(scattering_denominator(params, 0.0, lam_crit));
    for (int i = 0; i < n_scan; ++i) {
        const double w = -wmax + 2.0 * wmax * i / (n_scan - 1);
        const double a = std::abs(scattering_denominator(params, w, lam_crit));
        if (a < best_abs) {
            best_abs = a;
            best_w = w;
        }
    }
    double half = 2.0 * wmax / (n_scan - 1);
    for (int round = 0; round < 24 && best_abs > 1e-12; ++round) {
        constexpr int n_local = 41;
        for (int i = 0; i < n_local; ++i) {
            const double w = best_w - half + 2.0 * half * i / (n_local - 1);
            const double a = std::abs(scattering_denominator(params, w, lam_crit));
            if (a < best_abs) {
                best_abs = a;
                best_w = w;
            }
        }
        half /= 10.0;
    }
    if (std::abs(best_w) > 1e-6 * wmax || best_abs > 1e-6)
        throw InvariantViolation(
            "stability scan found the denominator zero away from resonance (w = " +
            std::to_string(best_w) + ", |D| = " + std::to_string(best_abs) + ")");
    return lam_crit;
}

double stability_threshold_rootfind(const SystemParams& params) {
    params.validate();
    // D(0; lambda) = 1 - lambda^2 chi_S(0) chi_I(0) is real and decreasing in
    // lambda^2; bisect the sign change of D(0).
    auto d0 = [&](double lam) {
        return scattering_denominator(params, 0.0, lam).real();
    };
    double lo = 0.0;
    double hi = params.kappa;
    while (d0(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (d0(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void require_below_threshold(const SystemParams& params) {
    params.validate();
    const double lam_crit =
        (params.kappa / 2.0) * std::sqrt(1.0 + params.cooperativity_eff());
    if (!(params.lambda < lam_crit))
        throw InstabilityError(params.lambda, lam_crit);
}

} // namespace pmesim
