#pragma once

#include "pmesim/gaussian.hpp"
#include "pmesim/params.hpp"
#include "pmesim/quadrature.hpp"

#include <vector>

namespace pmesim {

// Which bipartition the entanglement figure refers to.
enum class EntanglementKind {
    IdlerMemory,  // EoF of the reduced (idler, memory) state
    MemoryVsBoth, // entropy of the memory across the pure tripartition
};

std::string to_string(EntanglementKind k);

// Frequency-resolved figures at a grid of detunings.
struct EntanglementSpectrum {
    std::vector<double> omegas;             // rad/s
    std::vector<double> ef_idler_memory;    // ebits per mode
    std::vector<double> ef_memory_vs_both;  // ebits per mode
    std::vector<double> n_idler;            // mean occupation per mode
    std::vector<double> n_memory;
};

// Per grid point: T(omega) -> covariance -> both entanglement measures and
// the mean occupations.
EntanglementSpectrum ef_spectrum(const SystemParams& params,
                                 std::span<const double> omega_grid);

// E_F at a single detuning (ebits per mode).
double ef_at(const SystemParams& params, double omega, EntanglementKind which);

struct RateResult {
    double value = 0.0; // ebits/s (or s^-1 for fluxes)
    double quad_error = 0.0;
    long evaluations = 0;
};

// Entanglement rate E_R = (1/2pi) * integral E_F(w) dw over the real line.
RateResult entanglement_rate(const SystemParams& params, EntanglementKind which,
                             double rel_tol = 1e-6);

struct HeraldingResult {
    double eta = 0.0;
    bool memory_decoupled = false; // G = 0: eta forced to 0, flagged
};

// eta = integral n_M/(1+n_M) dw / integral n_I/(1+n_I) dw.  Throws
// DomainError at lambda = 0 (0/0); use heralding_efficiency_weak_drive_limit
// for the lambda -> 0 limit.
HeraldingResult heralding_efficiency(const SystemParams& params,
                                     double rel_tol = 1e-6);

// Leading-order lambda -> 0 limit of eta (the lambda^2 factors cancel).
double heralding_efficiency_weak_drive_limit(const SystemParams& params,
                                             double rel_tol = 1e-6);

enum class OutputMode { Idler, Signal, Memory };

// Photon flux (1/2pi) * integral n_u(w) dw; the mean photon number per time
// bin of width 1/kappa is flux/kappa.
RateResult photon_flux(const SystemParams& params, OutputMode which,
                       double rel_tol = 1e-6);

} // namespace pmesim
