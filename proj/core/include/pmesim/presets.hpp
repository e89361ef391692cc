#pragma once

#include "pmesim/sweep.hpp"

namespace pmesim {

// Example experimental parameter set: Gamma = 150 MHz, G = 0.3 GHz,
// kappa = 150 MHz, lambda = 40 MHz, F_AFC = 3, Delta = 1 MHz (T_M = 1 us
// under the ordinary convention).
inline SystemParams table1_params(UnitsConvention conv) {
    SystemParams p;
    p.kappa = to_angular_rate(150.0, 1e6, conv);
    p.lambda = to_angular_rate(40.0, 1e6, conv);
    p.g_coll = to_angular_rate(0.3, 1e9, conv);
    p.gamma_inh = to_angular_rate(150.0, 1e6, conv);
    return afc_effective_params(
        p, AfcParams::from_finesse(3.0, to_angular_rate(1.0, 1e6, conv), conv));
}

// Normalized (G, Gamma) sweep at weak drive, kappa = 1 rad/s: G in
// [0.05, 2] kappa, Gamma in [0.1, 4] kappa, log-spaced 61x61, lambda = 0.1
// kappa.  Brackets the impedance-matching curve 4 G^2 = kappa Gamma and the
// observed optimum region.
inline SweepSpec fig2a_spec(SweepMetric metric = SweepMetric::EntanglementRateIdlerMemory) {
    SweepSpec spec;
    spec.fixed.kappa = 1.0;
    spec.fixed.lambda = 0.1;
    spec.fixed.gamma_inh = 1.0;
    spec.fixed.g_coll = 0.5;
    spec.axis1 = {SweepParameter::GColl, 0.05, 2.0, 61, true};
    spec.axis2 = {SweepParameter::GammaInh, 0.1, 4.0, 61, true};
    spec.metric = metric;
    spec.units = UnitsConvention::Angular;
    return spec;
}

// Drive sweep on the impedance-matched line 2G = Gamma = kappa (= 1 rad/s).
inline std::vector<double> fig2b_lambda_grid(int points = 30) {
    SweepAxis ax{SweepParameter::Lambda, 0.705 / points, 0.705, points, false};
    return ax.values();
}

inline SystemParams fig2b_params() {
    SystemParams p;
    p.kappa = 1.0;
    p.gamma_inh = 1.0;
    p.g_coll = 0.5;
    p.lambda = 0.1;
    return p;
}

// (lambda, kappa) sweep with the fixed Table-1 coupling and linewidth:
// lambda in [2, 50] MHz (49 points), kappa in [5, 300] MHz (60 points),
// both linear.  Cells at or above threshold form the white region.
inline SweepSpec fig4_spec(SweepMetric metric, UnitsConvention conv) {
    SweepSpec spec;
    spec.fixed = table1_params(conv);
    spec.axis1 = {SweepParameter::Lambda, to_angular_rate(2.0, 1e6, conv),
                  to_angular_rate(50.0, 1e6, conv), 49, false};
    spec.axis2 = {SweepParameter::Kappa, to_angular_rate(5.0, 1e6, conv),
                  to_angular_rate(300.0, 1e6, conv), 60, false};
    spec.metric = metric;
    spec.units = conv;
    return spec;
}

} // namespace pmesim
