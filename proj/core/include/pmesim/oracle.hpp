#pragma once

#include "pmesim/gaussian.hpp"
#include "pmesim/params.hpp"

#include <Eigen/Dense>

#include <vector>

namespace pmesim {

// Brute-force validator: replaces the analytic continuum elimination with an
// explicitly discretized memory ensemble and solves the driven steady-state
// linear system directly.
struct OracleConfig {
    int n_memory_modes = 400;     // N
    double window_factor = 20.0;  // memory modes span [-W, W], W = factor * Gamma
    double eps_factor = 1.5;      // base regularization, eps = factor * (2W/N)
    int extrapolation_levels = 3; // Richardson levels at eps * {1, 1.5, 2}
    // Sample the bath density with linewidth Gamma - 2*eps so the Poisson
    // broadening of the damped discrete modes restores Gamma exactly
    // (Cauchy * Cauchy convolution); disable for the raw first-order mode.
    bool narrow_bath = true;

    void validate(const SystemParams& params) const;
};

struct DiscretizedModel {
    std::vector<double> mode_freqs;  // omega_k at bin midpoints
    std::vector<double> couplings;   // g_k = G_eff sqrt(rho(omega_k) d_omega)
    double spacing = 0.0;            // d_omega
    double epsilon = 0.0;            // per-mode damping this model was built for
    double kappa = 0.0;
    double lambda = 0.0;

    double coupling_weight_sq() const; // sum g_k^2
};

// (N+2)-mode coupled-mode generator for one regularization epsilon: signal
// (loss kappa, couplings g_k, TMS lambda to the idler conjugate), idler
// conjugate (loss kappa), N memory modes (detunings omega_k, damping eps).
DiscretizedModel build_discretized_model(const SystemParams& params,
                                         const OracleConfig& cfg, double epsilon);

// |T_uv|^2 magnitudes from the discretized steady-state solve at one
// detuning, Richardson-extrapolated over the epsilon schedule.  Mode order
// matches ScatteringMatrix.
struct OracleScattering {
    double omega = 0.0;
    Eigen::Matrix3d t2;                 // extrapolated |T|^2
    std::vector<Eigen::Matrix3d> per_eps; // raw values per schedule level
    std::vector<double> eps_schedule;
};

OracleScattering linear_response_scattering(const SystemParams& params,
                                            double omega, const OracleConfig& cfg);

// Two-mode (idler, memory) covariance assembled from the oracle's
// phase-invariant second moments (occupations and |<a_I a_M>|).
CovarianceMatrix oracle_covariance_im(const OracleScattering& s);

// Memory self-energy reconstructed as sum_k g_k^2 / (eps + i(omega_k - w)),
// extrapolated over the same schedule; validates memory_self_energy.
std::complex<double> oracle_self_energy(const SystemParams& params, double omega,
                                        const OracleConfig& cfg);

} // namespace pmesim
