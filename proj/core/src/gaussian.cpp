#include "pmesim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pmesim {

namespace {

constexpr double physicality_tol = 1e-9;

Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

// nu-tilde-minus of a standard-form state anti-squeezed by r along the
// aligned direction; pure scalar arithmetic for the hot path.
double nu_tilde_after_antisqueeze(const TwoModeStandardForm& sf, double r) {
    const double ch = std::cosh(r), sh = std::sinh(r);
    const double a = sf.a, b = sf.b;
    // x sector mixes with -sh, p sector with +sh; a standard-form state
    // stays in standard form under the aligned TMS.
    const double a2 = ch * ch * a + sh * sh * b - 2.0 * ch * sh * sf.c_plus;
    const double b2 = sh * sh * a + ch * ch * b - 2.0 * ch * sh * sf.c_plus;
    const double cp = (ch * ch + sh * sh) * sf.c_plus - ch * sh * (a + b);
    const double ap = ch * ch * a + sh * sh * b + 2.0 * ch * sh * sf.c_minus;
    const double bp = sh * sh * a + ch * ch * b + 2.0 * ch * sh * sf.c_minus;
    const double cm = (ch * ch + sh * sh) * sf.c_minus + ch * sh * (a + b);
    // After the transform the x and p diagonal entries differ in general
    // (unless c_plus = -c_minus); use the full 2-invariant formula on the
    // transformed blocks.
    const double det_a = a2 * ap;
    const double det_b = b2 * bp;
    const double det_c = cp * cm;
    const double det_s = (a2 * b2 - cp * cp) * (ap * bp - cm * cm);
    const double delta = det_a + det_b - 2.0 * det_c;
    const double disc = std::max(delta * delta - 4.0 * det_s, 0.0);
    // 2 det / (delta + sqrt(disc)) avoids the cancellation in
    // (delta - sqrt(disc)) / 2 when the eigenvalue is small.
    const double nu2 = 2.0 * std::max(det_s, 0.0) / (delta + std::sqrt(disc));
    return std::sqrt(std::max(nu2, 0.0));
}

// General 4x4 version: anti-squeeze along a direction set by local phase
// rotations R(theta) (+) R(-theta).
double nu_tilde_after_antisqueeze(const Eigen::Matrix4d& sigma, double r,
                                  double theta) {
    Eigen::Matrix4d sq = Eigen::Matrix4d::Zero();
    const double ch = std::cosh(r), sh = std::sinh(r);
    sq(0, 0) = ch; sq(0, 2) = -sh;
    sq(1, 1) = ch; sq(1, 3) = sh;
    sq(2, 0) = -sh; sq(2, 2) = ch;
    sq(3, 1) = sh; sq(3, 3) = ch;
    if (theta != 0.0) {
        Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
        const double c = std::cos(theta), s = std::sin(theta);
        rot(0, 0) = c; rot(0, 1) = -s; rot(1, 0) = s; rot(1, 1) = c;
        rot(2, 2) = c; rot(2, 3) = s; rot(3, 2) = -s; rot(3, 3) = c;
        sq = rot * sq * rot.transpose();
    }
    const Eigen::Matrix4d sp = sq * sigma * sq.transpose();
    const double det_a = sp.block<2, 2>(0, 0).determinant();
    const double det_b = sp.block<2, 2>(2, 2).determinant();
    const double det_c = sp.block<2, 2>(0, 2).determinant();
    const double det_s = sp.determinant();
    const double delta = det_a + det_b - 2.0 * det_c;
    const double disc = std::max(delta * delta - 4.0 * det_s, 0.0);
    const double nu2 = 2.0 * std::max(det_s, 0.0) / (delta + std::sqrt(disc));
    return std::sqrt(std::max(nu2, 0.0));
}

// Minimal anti-squeezing that renders the state separable along one
// direction; returns the amount of squeezing, or +inf when that direction
// never disentangles.  nt(r) must be the nu-tilde profile along r.
template <class F>
double first_ppt_crossing(const F& nt, double r_cap) {
    constexpr int n_scan = 64;
    double lo = 0.0;
    double hi = r_cap;
    bool found = false;
    for (int k = 1; k <= n_scan; ++k) {
        const double r = r_cap * k / n_scan;
        if (nt(r) >= 1.0) {
            lo = r_cap * (k - 1) / n_scan;
            hi = r;
            found = true;
            break;
        }
    }
    // The end point removes the correlations entirely (product of thermal
    // states), so it is separable up to roundoff; treat it as the crossing
    // when the scan saw none.
    if (!found) return r_cap;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(hi, 1.0); ++it) {
        const double mid = 0.5 * (lo + hi);
        (nt(mid) < 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Brings one 2x2 symmetric positive block to a*I by a det +1 congruence.
// Reflections are excluded: a reflection on one mode is a partial transpose,
// not a symplectic operation.
void isotropize(const Eigen::Matrix2d& block, Eigen::Matrix2d& s, double& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(block);
    const Eigen::Vector2d ev = es.eigenvalues();
    if (!(ev(0) > 0.0))
        throw NumericError("covariance block is not positive definite");
    a = std::sqrt(ev(0) * ev(1));
    Eigen::Matrix2d vecs = es.eigenvectors();
    if (vecs.determinant() < 0.0) vecs.col(1) *= -1.0;
    const Eigen::Matrix2d d =
        Eigen::Vector2d(std::sqrt(a / ev(0)), std::sqrt(a / ev(1))).asDiagonal();
    s = d * vecs.transpose();
}

} // namespace

CovarianceMatrix::CovarianceMatrix(int n_modes, Eigen::MatrixXd sigma)
    : n_modes_(n_modes), sigma_(std::move(sigma)) {
    if (n_modes_ < 1 || sigma_.rows() != 2 * n_modes_ || sigma_.cols() != 2 * n_modes_)
        throw DomainError("covariance matrix dimensions do not match mode count");
    const double asym = (sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
    if (asym > 1e-12 * scale)
        throw DomainError("covariance matrix is not symmetric");
    sigma_ = 0.5 * (sigma_ + sigma_.transpose().eval());
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
    return CovarianceMatrix(n_modes, Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

Eigen::MatrixXd symplectic_from_scattering(const ScatteringMatrix& T) {
    // a'_i = sum_j A_ij a_j + B_ij a_j^dag with the idler row conjugated.
    Eigen::Matrix3cd A = Eigen::Matrix3cd::Zero();
    Eigen::Matrix3cd B = Eigen::Matrix3cd::Zero();
    A(0, 0) = std::conj(T.t(0, 0));
    B(0, 1) = std::conj(T.t(0, 1));
    B(0, 2) = std::conj(T.t(0, 2));
    A(1, 1) = T.t(1, 1);
    A(1, 2) = T.t(1, 2);
    B(1, 0) = T.t(1, 0);
    A(2, 1) = T.t(2, 1);
    A(2, 2) = T.t(2, 2);
    B(2, 0) = T.t(2, 0);

    Eigen::MatrixXd s(6, 6);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const std::complex<double> ap = A(i, j) + B(i, j);
            const std::complex<double> am = A(i, j) - B(i, j);
            s(2 * i, 2 * j) = ap.real();
            s(2 * i, 2 * j + 1) = -am.imag();
            s(2 * i + 1, 2 * j) = ap.imag();
            s(2 * i + 1, 2 * j + 1) = am.real();
        }
    }
    return s;
}

CovarianceMatrix covariance_from_scattering(const ScatteringMatrix& T) {
    if (T.max_residual() > 1e-8)
        throw InvariantViolation("scattering matrix violates the Bogoliubov "
                                 "identities; refusing to build a covariance");
    const Eigen::MatrixXd s = symplectic_from_scattering(T);
    return CovarianceMatrix(3, s * s.transpose());
}

CovarianceMatrix reduce(const CovarianceMatrix& cm, std::span<const int> modes) {
    if (modes.empty()) throw DomainError("mode subset must be non-empty");
    const int n = static_cast<int>(modes.size());
    Eigen::MatrixXd out(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        if (modes[i] < 0 || modes[i] >= cm.n_modes())
            throw DomainError("mode index out of range");
        for (int j = 0; j < n; ++j)
            out.block<2, 2>(2 * i, 2 * j) =
                cm.sigma().block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
    return CovarianceMatrix(n, std::move(out));
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
    const int n = static_cast<int>(sigma.rows()) / 2;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.eigenvalues()(0) <= 0.0)
        throw NumericError("covariance matrix is not positive definite");
    const Eigen::MatrixXd root =
        es.eigenvectors() *
        es.eigenvalues().cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();
    // i * root * Omega * root is Hermitian with eigenvalues +-nu_k.
    const Eigen::MatrixXcd h =
        std::complex<double>(0.0, 1.0) * (root * symplectic_form(n) * root);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);
    std::vector<double> nus;
    for (int k = 2 * n - 1; k >= n; --k) nus.push_back(hs.eigenvalues()(k));
    for (double nu : nus)
        if (nu < 1.0 - physicality_tol)
            throw NumericError("unphysical covariance: symplectic eigenvalue " +
                               std::to_string(nu) + " < 1");
    return nus;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& cm) {
    return symplectic_eigenvalues(cm.sigma());
}

double entropy_g(double nu) {
    if (nu <= 1.0 + 1e-14) return 0.0;
    const double xp = 0.5 * (nu + 1.0);
    const double xm = 0.5 * (nu - 1.0);
    return xp * std::log2(xp) - xm * std::log2(xm);
}

double entropy_of_entanglement(const CovarianceMatrix& global_pure,
                               std::span<const int> partition) {
    for (double nu : symplectic_eigenvalues(global_pure))
        if (std::abs(nu - 1.0) > 1e-6)
            throw NumericError("global state is not pure (nu = " +
                               std::to_string(nu) +
                               "); entropy of entanglement is undefined");
    const CovarianceMatrix red = reduce(global_pure, partition);
    double s = 0.0;
    for (double nu : symplectic_eigenvalues(red)) s += entropy_g(nu);
    return s;
}

double TwoModeStandardForm::imbalance() const {
    const double denom = a + b - 2.0;
    if (denom <= 1e-12) return 0.0;
    return std::abs(a - b) / denom;
}

double TwoModeStandardForm::nu_tilde_minus() const {
    const double det_c = c_plus * c_minus;
    const double det_s = (a * b - c_plus * c_plus) * (a * b - c_minus * c_minus);
    const double delta = a * a + b * b - 2.0 * det_c;
    const double disc = std::max(delta * delta - 4.0 * det_s, 0.0);
    const double nu2 = 2.0 * std::max(det_s, 0.0) / (delta + std::sqrt(disc));
    return std::sqrt(std::max(nu2, 0.0));
}

TwoModeStandardForm standard_form(const CovarianceMatrix& two_mode) {
    if (two_mode.n_modes() != 2)
        throw DomainError("standard form requires a two-mode state");
    const Eigen::Matrix4d sig = two_mode.sigma();

    Eigen::Matrix2d s1, s2;
    TwoModeStandardForm sf;
    isotropize(sig.block<2, 2>(0, 0), s1, sf.a);
    isotropize(sig.block<2, 2>(2, 2), s2, sf.b);
    const Eigen::Matrix2d c = s1 * sig.block<2, 2>(0, 2) * s2.transpose();

    // Diagonalize the cross block by local rotations (SVD with any
    // reflections folded into the sign of the singular values).
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double cp = svd.singularValues()(0);
    double cm = svd.singularValues()(1);
    if (svd.matrixU().determinant() < 0.0) cm = -cm;
    if (svd.matrixV().determinant() < 0.0) cm = -cm;
    // Convention c_plus >= |c_minus|; swapping x<->p on both modes and
    // negating both correlations are local symplectics.
    if (std::abs(cm) > std::abs(cp)) std::swap(cp, cm);
    if (cp < 0.0) {
        cp = -cp;
        cm = -cm;
    }
    sf.c_plus = cp;
    sf.c_minus = cm;
    return sf;
}

std::string to_string(EofMethod m) {
    switch (m) {
        case EofMethod::ExactSymmetric: return "exact_symmetric";
        case EofMethod::BoundGeneral: return "bound_general";
        case EofMethod::PureStateEntropy: return "pure_state_entropy";
    }
    return "unknown";
}

double log_negativity(const CovarianceMatrix& two_mode) {
    return standard_form(two_mode).log_negativity();
}

EntanglementResult eof_two_mode(const CovarianceMatrix& two_mode,
                                const EofOptions& opt) {
    const TwoModeStandardForm sf = standard_form(two_mode);
    // Reject unphysical input early.
    symplectic_eigenvalues(two_mode);

    EntanglementResult res;
    res.imbalance = sf.imbalance();
    res.log_negativity = sf.log_negativity();

    const double nt0 = sf.nu_tilde_minus();
    const bool symmetric = res.imbalance < 1e-6;
    res.method = symmetric ? EofMethod::ExactSymmetric : EofMethod::BoundGeneral;
    if (nt0 >= 1.0) {
        // PPT: separable, EoF = 0 (necessary and sufficient for two modes).
        res.ebits = 0.0;
        return res;
    }

    if (symmetric) {
        // Exact closed form: the disentangling squeezing is
        // r0 = -log(nu-tilde-minus)/2.
        const double r0 = -0.5 * std::log(nt0);
        res.ebits = entropy_g(std::cosh(2.0 * r0));
        return res;
    }

    // Anti-squeezing by r_cap zeroes the x correlation, leaving det C = 0,
    // which is separable; the aligned direction therefore always reaches
    // separability within [0, r_cap].
    const double t = 2.0 * sf.c_plus / (sf.a + sf.b);
    const double r_cap = 0.5 * std::atanh(std::min(t, 1.0 - 1e-15));
    const bool balanced_correlations =
        std::abs(sf.c_plus + sf.c_minus) <=
        1e-10 * (std::abs(sf.c_plus) + std::abs(sf.c_minus) + 1.0);
    // Two-mode reductions of a pure three-mode state satisfy
    // (a+1)(b-1) = c^2; there nu-tilde reaches 1 tangentially exactly at
    // r_cap, where root-finding is ill-conditioned, so take the closed form.
    const double family_gap =
        std::abs(sf.c_plus * sf.c_plus - (sf.a + 1.0) * (sf.b - 1.0));
    const bool tangent_family =
        balanced_correlations &&
        family_gap <= 1e-9 * std::max(1.0, (sf.a + 1.0) * (sf.b - 1.0));
    const double r_aligned =
        tangent_family
            ? r_cap
            : first_ppt_crossing(
                  [&](double r) { return nu_tilde_after_antisqueeze(sf, r); },
                  r_cap);

    double r_best = r_aligned;
    if (!balanced_correlations || opt.force_direction_search) {
        // Golden-section over the squeezer direction, initialized at the
        // aligned axis (which standard form singles out).
        Eigen::Matrix4d s4 = Eigen::Matrix4d::Identity();
        s4(0, 0) = sf.a; s4(1, 1) = sf.a;
        s4(2, 2) = sf.b; s4(3, 3) = sf.b;
        s4(0, 2) = s4(2, 0) = sf.c_plus;
        s4(1, 3) = s4(3, 1) = sf.c_minus;
        auto r_of_theta = [&](double theta) {
            auto nt = [&](double r) {
                return nu_tilde_after_antisqueeze(s4, r, theta);
            };
            if (nt(0.0) >= 1.0) return 0.0;
            // Directions away from the aligned axis may never disentangle;
            // scan a generous range and report +inf if separability is
            // never reached.
            const double r_hi = std::max(4.0 * r_cap, 1.0);
            constexpr int n_scan = 48;
            for (int k = 1; k <= n_scan; ++k) {
                const double r = r_hi * k / n_scan;
                if (nt(r) >= 1.0) {
                    double lo = r_hi * (k - 1) / n_scan, hi = r;
                    for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        (nt(mid) < 1.0 ? lo : hi) = mid;
                    }
                    return 0.5 * (lo + hi);
                }
            }
            return std::numeric_limits<double>::infinity();
        };
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = -0.25 * std::numbers::pi, hi = 0.25 * std::numbers::pi;
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = r_of_theta(x1), f2 = r_of_theta(x2);
        while (hi - lo > opt.angle_tol) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = r_of_theta(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = r_of_theta(x2);
            }
        }
        const double r_theta = std::min(f1, f2);
        r_best = std::min(r_best, r_theta);
    }

    res.ebits = entropy_g(std::cosh(2.0 * r_best));
    return res;
}

} // namespace pmesim
