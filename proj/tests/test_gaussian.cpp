#include "pmesim/gaussian.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace pmesim;

namespace {

SystemParams make(double kappa, double g, double gamma, double lambda) {
    SystemParams p;
    p.kappa = kappa;
    p.g_coll = g;
    p.gamma_inh = gamma;
    p.lambda = lambda;
    return p;
}

// Two-mode squeezed vacuum covariance with squeezing parameter r.
CovarianceMatrix tmsv(double r) {
    const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
    Eigen::Matrix4d sig;
    sig << c, 0, s, 0,
           0, c, 0, -s,
           s, 0, c, 0,
           0, -s, 0, c;
    return CovarianceMatrix(2, sig);
}

// Random single-mode symplectic: rotation * squeeze * rotation.
Eigen::Matrix2d random_local_symplectic(std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto rot = [](double t) {
        Eigen::Matrix2d m;
        m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
        return m;
    };
    const double z = std::exp(0.7 * uni(rng));
    Eigen::Matrix2d sq = Eigen::Vector2d(z, 1.0 / z).asDiagonal();
    return rot(3.0 * uni(rng)) * sq * rot(3.0 * uni(rng));
}

SystemParams random_below_threshold(std::mt19937& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(uni(rng) * std::log(hi / lo));
    };
    SystemParams p = make(log_uniform(0.05, 20.0), 3.0 * uni(rng),
                          log_uniform(0.05, 20.0), 0.0);
    p.lambda = (0.05 + 0.9 * uni(rng)) * stability_threshold(p);
    return p;
}

constexpr std::array<int, 2> modes_im{0, 2};
constexpr std::array<int, 1> modes_m{2};

} // namespace

TEST_CASE("vacuum covariance from the identity transform") {
    ScatteringMatrix T;
    T.kappa = 1.0;
    T.kappa_m = 0.0;
    T.t = Eigen::Matrix3cd::Identity();
    const auto cov = covariance_from_scattering(T);
    CHECK((cov.sigma() - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("assembled three-mode state is pure below threshold") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const SystemParams p = random_below_threshold(rng);
        std::uniform_real_distribution<double> uw(-3.0, 3.0);
        const auto T = scattering_matrix(p, uw(rng) * p.kappa);
        const auto cov = covariance_from_scattering(T);
        for (double nu : symplectic_eigenvalues(cov))
            CHECK(std::abs(nu - 1.0) < 1e-8);
    }
}

TEST_CASE("embedded occupations satisfy n_I = n_S + n_M") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        const SystemParams p = random_below_threshold(rng);
        const auto T = scattering_matrix(p, 0.4 * p.kappa);
        const auto cov = covariance_from_scattering(T);
        auto occupation = [&](int mode) {
            return 0.25 * (cov.sigma()(2 * mode, 2 * mode) +
                           cov.sigma()(2 * mode + 1, 2 * mode + 1) - 2.0);
        };
        const double n_i = occupation(0), n_s = occupation(1), n_m = occupation(2);
        CHECK(n_i == doctest::Approx(n_s + n_m).epsilon(1e-9));
        CHECK(n_i == doctest::Approx(std::norm(T.t(0, 1)) + std::norm(T.t(0, 2)))
                         .epsilon(1e-10));
        CHECK(n_m == doctest::Approx(std::norm(T.t(2, 0))).epsilon(1e-10));
    }
}

TEST_CASE("reduce") {
    SUBCASE("vacuum marginal") {
        const auto v = CovarianceMatrix::vacuum(3);
        const auto r = reduce(v, modes_m);
        CHECK(r.n_modes() == 1);
        CHECK((r.sigma() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() ==
              0.0);
    }
    SUBCASE("TMSV marginal is thermal with nu = cosh 2r") {
        // cosh^2 r = 2 -> cosh 2r = 3.
        const double r = std::acosh(std::sqrt(2.0));
        const auto red = reduce(tmsv(r), std::array<int, 1>{0});
        const auto nus = symplectic_eigenvalues(red);
        CHECK(nus.size() == 1);
        CHECK(nus[0] == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("bad indices") {
        const auto v = CovarianceMatrix::vacuum(2);
        CHECK_THROWS_AS(reduce(v, std::array<int, 1>{5}), DomainError);
        CHECK_THROWS_AS(reduce(v, std::span<const int>{}), DomainError);
    }
}

TEST_CASE("symplectic eigenvalues") {
    SUBCASE("vacuum") {
        for (double nu : symplectic_eigenvalues(CovarianceMatrix::vacuum(4)))
            CHECK(nu == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("single-mode thermal nbar = 1") {
        CovarianceMatrix th(1, 3.0 * Eigen::MatrixXd::Identity(2, 2));
        CHECK(symplectic_eigenvalues(th)[0] == doctest::Approx(3.0).epsilon(1e-13));
    }
    SUBCASE("invariant under symplectic conjugation") {
        std::mt19937 rng(5);
        for (int trial = 0; trial < 25; ++trial) {
            const SystemParams p = random_below_threshold(rng);
            const auto T = scattering_matrix(p, 0.2 * p.kappa);
            // Symplectic 6x6 from a valid Bogoliubov transform, with local
            // symplectics mixed in.
            Eigen::MatrixXd s = symplectic_from_scattering(T);
            for (int m = 0; m < 3; ++m)
                s.block<2, 2>(2 * m, 2 * m) *= 1.0; // keep structure
            Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(6, 6);
            std::uniform_real_distribution<double> uth(1.0, 4.0);
            for (int m = 0; m < 3; ++m)
                sig.block<2, 2>(2 * m, 2 * m) =
                    uth(rng) * Eigen::Matrix2d::Identity();
            const auto before = symplectic_eigenvalues(CovarianceMatrix(3, sig));
            const auto after = symplectic_eigenvalues(
                CovarianceMatrix(3, s * sig * s.transpose()));
            for (size_t k = 0; k < before.size(); ++k)
                CHECK(std::abs(before[k] - after[k]) <= 1e-10 * before[k]);
        }
    }
    SUBCASE("unphysical covariance is rejected") {
        CovarianceMatrix bad(1, 0.5 * Eigen::MatrixXd::Identity(2, 2));
        CHECK_THROWS_AS(symplectic_eigenvalues(bad), NumericError);
    }
}

TEST_CASE("entropy function g") {
    CHECK(entropy_g(1.0) == 0.0);
    CHECK(entropy_g(3.0) == doctest::Approx(2.0).epsilon(1e-14));
    // Monotone increasing with decreasing slope on nu > 1 (the slope
    // diverges at nu = 1 and falls off like 1/nu after).
    double prev = 0.0, prev_slope = 1e300;
    for (double nu = 1.0; nu <= 9.0; nu += 0.25) {
        const double val = entropy_g(nu);
        CHECK(val >= prev);
        if (nu > 1.0) {
            const double slope = (val - prev) / 0.25;
            CHECK(slope <= prev_slope + 1e-12);
            CHECK(slope > 0.0);
            prev_slope = slope;
        }
        prev = val;
    }
}

TEST_CASE("entropy of entanglement") {
    SUBCASE("vacuum carries none") {
        CHECK(entropy_of_entanglement(CovarianceMatrix::vacuum(3), modes_im) == 0.0);
    }
    SUBCASE("TMSV with cosh^2 r = 2 carries two ebits") {
        const double r = std::acosh(std::sqrt(2.0));
        CHECK(entropy_of_entanglement(tmsv(r), std::array<int, 1>{0}) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("memory partition equals g(2 n_M + 1)") {
        const double mhz = 1e6;
        SystemParams p = make(150 * mhz, 300 * mhz, 150 * mhz, 40 * mhz);
        p = afc_effective_params(p, AfcParams::from_finesse(3.0, 1 * mhz,
                                                            UnitsConvention::Angular));
        const auto T = scattering_matrix(p, 0.0);
        const auto cov = covariance_from_scattering(T);
        const double n_m = std::norm(T.t(2, 0));
        CHECK(entropy_of_entanglement(cov, modes_m) ==
              doctest::Approx(entropy_g(2.0 * n_m + 1.0)).epsilon(1e-8));
    }
    SUBCASE("mixed global state is rejected") {
        CovarianceMatrix th(2, 2.0 * Eigen::MatrixXd::Identity(4, 4));
        CHECK_THROWS_AS(entropy_of_entanglement(th, std::array<int, 1>{0}),
                        NumericError);
    }
}

TEST_CASE("log negativity") {
    CHECK(log_negativity(CovarianceMatrix::vacuum(2)) == 0.0);
    for (double r : {0.2, 0.8, 1.5}) {
        CHECK(log_negativity(tmsv(r)) ==
              doctest::Approx(2.0 * r / std::log(2.0)).epsilon(1e-12));
    }
    // Separable two-mode thermal product.
    Eigen::Matrix4d sig = Eigen::Matrix4d::Identity();
    sig.diagonal() << 3.0, 3.0, 1.8, 1.8;
    CHECK(log_negativity(CovarianceMatrix(2, sig)) == 0.0);
}

TEST_CASE("entanglement of formation") {
    SUBCASE("vacuum") {
        const auto r = eof_two_mode(CovarianceMatrix::vacuum(2));
        CHECK(r.ebits == 0.0);
        CHECK(r.log_negativity == 0.0);
    }
    SUBCASE("pure TMSV reproduces the entropy of entanglement") {
        for (double r = 0.0; r <= 3.0; r += 0.2) {
            const auto e = eof_two_mode(tmsv(r));
            const double exact = entropy_g(std::cosh(2.0 * r));
            CHECK(std::abs(e.ebits - exact) < 1e-8);
            CHECK(e.method == EofMethod::ExactSymmetric);
            CHECK(e.imbalance < 1e-10);
        }
    }
    SUBCASE("EoF vanishes exactly when the partial transpose is positive") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int trial = 0; trial < 300; ++trial) {
            // Noisy TMSV: entangled iff nu_thermal * exp(-2r) < 1.
            const double r = 1.2 * uni(rng);
            const double nu_th = 1.0 + 2.5 * uni(rng);
            CovarianceMatrix st(2, nu_th * tmsv(r).sigma());
            const auto e = eof_two_mode(st);
            const bool ppt = standard_form(st).nu_tilde_minus() >= 1.0;
            CHECK((e.ebits == 0.0) == ppt);
            CHECK(e.ebits >= 0.0);
        }
    }
    SUBCASE("invariant under local symplectics") {
        std::mt19937 rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            const SystemParams p = random_below_threshold(rng);
            const auto T = scattering_matrix(p, 0.3 * p.kappa);
            const auto im =
                reduce(covariance_from_scattering(T), modes_im);
            const auto base = eof_two_mode(im);
            Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
            local.block<2, 2>(0, 0) = random_local_symplectic(rng);
            local.block<2, 2>(2, 2) = random_local_symplectic(rng);
            const CovarianceMatrix moved(2, local * im.sigma() * local.transpose());
            const auto e = eof_two_mode(moved);
            CHECK(std::abs(e.ebits - base.ebits) < 1e-8 * std::max(1.0, base.ebits));
        }
    }
    SUBCASE("aligned fast path agrees with the direction search") {
        std::mt19937 rng(29);
        EofOptions full;
        full.force_direction_search = true;
        for (int trial = 0; trial < 25; ++trial) {
            const SystemParams p = random_below_threshold(rng);
            std::uniform_real_distribution<double> uw(-1.5, 1.5);
            const auto T = scattering_matrix(p, uw(rng) * p.kappa);
            const auto im = reduce(covariance_from_scattering(T), modes_im);
            const auto fast = eof_two_mode(im);
            const auto slow = eof_two_mode(im, full);
            // The search path locates the separability crossing by
            // root-finding on a tangency, which caps its own precision.
            CHECK(std::abs(fast.ebits - slow.ebits) <
                  1e-6 * std::max(1.0, fast.ebits));
        }
    }
    SUBCASE("discarding the signal cannot increase entanglement") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 60; ++trial) {
            const SystemParams p = random_below_threshold(rng);
            std::uniform_real_distribution<double> uw(-2.0, 2.0);
            const auto T = scattering_matrix(p, uw(rng) * p.kappa);
            const auto cov = covariance_from_scattering(T);
            const double eof_im = eof_two_mode(reduce(cov, modes_im)).ebits;
            const double ent_m = entropy_of_entanglement(cov, modes_m);
            CHECK(eof_im <= ent_m + 1e-9);
        }
    }
    SUBCASE("unbalanced states carry the bound tag and the diagnostic") {
        const SystemParams p = make(1.0, 0.5, 1.0, 0.35);
        const auto T = scattering_matrix(p, 0.0);
        const auto im = reduce(covariance_from_scattering(T), modes_im);
        const auto e = eof_two_mode(im);
        CHECK(e.method == EofMethod::BoundGeneral);
        CHECK(e.imbalance > 1e-3);
        CHECK(e.log_negativity > 0.0);
    }
}

TEST_CASE("standard form recovers two-mode squeezed thermal parameters") {
    const double r = 0.6, nu_th = 1.7;
    CovarianceMatrix st(2, nu_th * tmsv(r).sigma());
    const auto sf = standard_form(st);
    CHECK(sf.a == doctest::Approx(nu_th * std::cosh(2.0 * r)).epsilon(1e-12));
    CHECK(sf.b == doctest::Approx(nu_th * std::cosh(2.0 * r)).epsilon(1e-12));
    CHECK(sf.c_plus == doctest::Approx(nu_th * std::sinh(2.0 * r)).epsilon(1e-12));
    CHECK(sf.c_minus == doctest::Approx(-nu_th * std::sinh(2.0 * r)).epsilon(1e-12));
}
