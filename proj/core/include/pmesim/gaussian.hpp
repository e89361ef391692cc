#pragma once

#include "pmesim/errors.hpp"
#include "pmesim/scattering.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace pmesim {

// Real symmetric covariance matrix of quadrature second moments in ordering
// (x1, p1, ..., xn, pn); vacuum = identity, so nu = 2*nbar + 1.
class CovarianceMatrix {
public:
    CovarianceMatrix(int n_modes, Eigen::MatrixXd sigma);

    int n_modes() const { return n_modes_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }

    static CovarianceMatrix vacuum(int n_modes);

private:
    int n_modes_;
    Eigen::MatrixXd sigma_;
};

// sigma = S_q S_q^T for the real symplectic matrix induced by the Bogoliubov
// transform acting on vacuum inputs; three modes in order (I, S, M).
CovarianceMatrix covariance_from_scattering(const ScatteringMatrix& T);

// The real symplectic 6x6 matrix itself (handy for tests).
Eigen::MatrixXd symplectic_from_scattering(const ScatteringMatrix& T);

// Partial trace: principal submatrix on the selected modes (0-based).
CovarianceMatrix reduce(const CovarianceMatrix& cm, std::span<const int> modes);

// Absolute values of the eigenvalues of i*Omega*sigma, deduplicated to one
// per mode and sorted descending.  Throws NumericError when a value falls
// below 1 beyond tolerance (unphysical sigma).
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm);
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& sigma);

// Thermal entropy function g(nu) in ebits; g(1) = 0.
double entropy_g(double nu);

// Von Neumann entropy of the reduced state on `partition` of a globally pure
// state; the exact entanglement measure across a pure bipartition.  Throws
// NumericError when the global state is not pure.
double entropy_of_entanglement(const CovarianceMatrix& global_pure,
                               std::span<const int> partition);

// max(0, -log2 nu-tilde-minus) from the partial transpose; exact for all
// two-mode Gaussian states.
double log_negativity(const CovarianceMatrix& two_mode);

// Two-mode standard form (a, b, diag(c_plus, c_minus)) reached by local
// symplectic operations, with c_plus >= |c_minus|.
struct TwoModeStandardForm {
    double a = 1.0;
    double b = 1.0;
    double c_plus = 0.0;
    double c_minus = 0.0;

    // |a-b| / (a+b-2); 0 for a symmetric state, 0 by convention for vacuum.
    double imbalance() const;
    // Smaller symplectic eigenvalue of the partial transpose.
    double nu_tilde_minus() const;
    double log_negativity() const { return std::max(0.0, -std::log2(nu_tilde_minus())); }
};

TwoModeStandardForm standard_form(const CovarianceMatrix& two_mode);

enum class EofMethod { ExactSymmetric, BoundGeneral, PureStateEntropy };

std::string to_string(EofMethod m);

struct EntanglementResult {
    double ebits = 0.0;
    EofMethod method = EofMethod::BoundGeneral;
    double log_negativity = 0.0;
    double imbalance = 0.0;
};

struct EofOptions {
    // Golden-section tolerance for the squeezer-direction search.
    double angle_tol = 1e-10;
    // Search the squeezer direction even for balanced-correlation states
    // (where the aligned direction is optimal; verified by tests).
    bool force_direction_search = false;
};

// Entanglement of formation of a two-mode Gaussian state: the minimal
// two-mode squeezing r0 whose removal renders the state separable gives
// E_F = cosh^2 r0 log2 cosh^2 r0 - sinh^2 r0 log2 sinh^2 r0.  Exact for
// symmetric states; an upper-bound construction otherwise (method tag
// records which case applied).  E_F = 0 iff the partial transpose is
// positive.
EntanglementResult eof_two_mode(const CovarianceMatrix& two_mode,
                                const EofOptions& opt = {});

} // namespace pmesim
