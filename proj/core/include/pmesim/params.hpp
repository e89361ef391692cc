#pragma once

#include "pmesim/errors.hpp"
#include "pmesim/units.hpp"

#include <complex>
#include <optional>
#include <string>

namespace pmesim {

// How the inhomogeneously broadened ensemble is modelled.
enum class MemoryModel { PureLorentzian, AfcModified };

inline std::string to_string(MemoryModel m) {
    return m == MemoryModel::PureLorentzian ? "pure_lorentzian" : "afc_modified";
}

// Atomic-frequency-comb parameters.  comb_spacing and tooth_width are
// angular rates; storage_time is in seconds and tied to the comb spacing by
// the units convention the comb was specified in (T_M = 1/Delta with Delta
// an ordinary frequency, i.e. T_M = 2*pi/comb_spacing for the default
// convention).
struct AfcParams {
    double finesse = 1.0;
    double comb_spacing = 0.0; // rad/s
    double tooth_width = 0.0;  // rad/s
    double storage_time = 0.0; // s

    // Derives tooth width and storage time from finesse and comb spacing.
    static AfcParams from_finesse(double finesse, double comb_spacing,
                                  UnitsConvention conv = UnitsConvention::Ordinary);

    void validate() const; // throws DomainError on violated invariants
};

// Normalized Lorentzian line shape, (1/2pi) * Gamma / (w^2 + (Gamma/2)^2).
double lorentzian_density(double omega, double gamma_inh);

// Memory spectral density rho(w).  The AFC-modified ensemble keeps the
// Lorentzian shape with a uniform density rescale (the comb is unresolved
// during the pump), so both kinds share the closed form.
struct SpectralDensity {
    enum class Kind { Lorentzian, AfcEffective };

    Kind kind = Kind::Lorentzian;
    double gamma_inh = 0.0;     // rad/s
    double density_scale = 1.0; // 1/F_AFC for the AFC-modified ensemble

    double operator()(double omega) const {
        return density_scale * lorentzian_density(omega, gamma_inh);
    }

    void validate() const;
};

// Memory self-energy Sigma(w) obtained by eliminating the continuum:
// Sigma(w) = s*G^2 / (Gamma/2 - i w) for the (scaled) Lorentzian density.
// Re Sigma = pi G_eff^2 rho(w) = kappa_M(w)/2; Im Sigma is the dispersive
// shift; Sigma(-w) = conj(Sigma(w)).
std::complex<double> memory_self_energy(double omega, double g_coll,
                                        const SpectralDensity& density);

// Structured memory-port rate kappa_M(w) = 2 pi G_eff^2 rho(w) = 2 Re Sigma.
double memory_port_rate(double omega, double g_coll, const SpectralDensity& density);

// Physical rates of one simulation run; the single source of truth.
// All fields are angular frequencies in rad/s.
struct SystemParams {
    double kappa = 0.0;     // cavity-waveguide coupling (signal and idler)
    double lambda = 0.0;    // parametric drive strength
    double g_coll = 0.0;    // collective atom-photon coupling G
    double gamma_inh = 0.0; // inhomogeneous linewidth Gamma
    MemoryModel memory_model = MemoryModel::PureLorentzian;
    std::optional<AfcParams> afc; // set iff memory_model == AfcModified

    void validate() const; // throws DomainError

    // Uniform density rescale applied to rho(w): 1, or 1/F_AFC.
    double density_scale() const;

    // Effective coupling after the AFC duty factor, G_eff = G * sqrt(scale).
    double g_eff() const;
    double g2_eff() const;

    // Cooperativity C = 4 G^2 / (kappa Gamma).
    double cooperativity() const;
    double cooperativity_eff() const;

    SpectralDensity spectral_density() const;

    SystemParams with_lambda(double new_lambda) const {
        SystemParams p = *this;
        p.lambda = new_lambda;
        return p;
    }
};

// Returns params with the collective coupling rescaled by the AFC duty
// factor, G_eff^2 = G^2 / F_AFC (density_scale = 1/F_AFC).  The scaling law
// is echoed into all output metadata; see afc_scaling_law().
SystemParams afc_effective_params(const SystemParams& params, const AfcParams& afc);

// Human-readable statement of the AFC scaling convention in use.
inline std::string afc_scaling_law() { return "G_eff^2 = G^2 / F_AFC"; }

// Smallest lambda for which the scattering denominator D(w) has a real-w
// zero.  Closed form (kappa/2)*sqrt(1 + C_eff) at w = 0; the implementation
// verifies by scanning w that the first zero occurs on resonance.
double stability_threshold(const SystemParams& params);

// Same threshold located by root-finding |D(0)| = 0 in lambda; cross-check
// for the closed form.
double stability_threshold_rootfind(const SystemParams& params);

// Throws InstabilityError if params.lambda >= stability_threshold(params).
void require_below_threshold(const SystemParams& params);

} // namespace pmesim
