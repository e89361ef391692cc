#pragma once

#include "pmesim/params.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace pmesim {

// Steady-state Bogoliubov scattering amplitudes at one detuning.  Mode order
// is (idler-conjugate, signal, memory): the first row/column transforms
// creation operators, which fixes the minus signs in the identities below.
struct ScatteringMatrix {
    double omega = 0.0;   // detuning (rad/s)
    double kappa = 0.0;   // waveguide port rate
    double kappa_m = 0.0; // structured memory-port rate kappa_M(omega)
    Eigen::Matrix3cd t;   // T_uv(omega)

    // Residuals of the six Bogoliubov magnitude identities (rows then
    // columns) and the two commutator cross identities; all should vanish.
    std::array<double, 6> bogoliubov_residuals() const;
    std::array<double, 2> cross_identity_residuals() const;
    double max_residual() const;
};

// Analytic T(omega) from the frequency-domain Heisenberg-Langevin solution
// with input-output boundary conditions on the waveguide and the structured
// memory port.  Throws InstabilityError at or above threshold.
ScatteringMatrix scattering_matrix(const SystemParams& params, double omega);

// Equivalent circuit: one two-mode-squeezing gate sandwiched by two beam
// splitters with the same angle.
struct CircuitDecomposition {
    double r = 0.0;      // TMS strength, cosh^2 r = |T_II|^2
    double theta1 = 0.0; // tan(theta1) = |T_IM / T_IS|
    double theta2 = 0.0; // tan(theta2) = |T_MI / T_SI|
};

// Decomposes T; at lambda = 0 both angle ratios are 0/0 and the analytic
// limit arctan(sqrt(kappa_M/kappa)) is used.  Throws InvariantViolation if
// |T_II| < 1 beyond tolerance.
CircuitDecomposition decompose_circuit(const ScatteringMatrix& T);

// tan^2(theta2) = C_eff / (1 + 4 w^2 / Gamma^2); independent closed-form
// check on the circuit decomposition.
double beam_splitter_angle_sq(const SystemParams& params, double omega);

} // namespace pmesim
