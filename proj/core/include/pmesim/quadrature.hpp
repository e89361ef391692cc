#pragma once

#include "pmesim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace pmesim {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0; // estimated absolute error
    long evaluations = 0;
    bool converged = true;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1]: {node, gauss weight, kronrod weight}.
inline constexpr double gk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

template <class F>
double gk15_panel(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = gk15[0][1] * f0;
    double k15 = gk15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += gk15[i][1] * fi;
        k15 += gk15[i][2] * fi;
    }
    g7 *= h;
    k15 *= h;
    // Degree-1 in the integrand so panel decisions (and hence results) are
    // exactly invariant under a uniform rescaling of f.
    err = std::abs(g7 - k15);
    return k15;
}

} // namespace detail

struct QuadratureOptions {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_panels = 4000;
    // Pre-split the domain at these interior points (resolves known narrow
    // features before adaptivity takes over).
    std::vector<double> breakpoints;
};

// Adaptive Gauss-Kronrod integration over a finite interval.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b,
                                    const QuadratureOptions& opt = {}) {
    struct Interval {
        double a, b, value, error;
    };
    QuadratureResult res;
    std::vector<Interval> work;

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : opt.breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0, total_err = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double e;
        const double v = detail::gk15_panel(f, cuts[i], cuts[i + 1], e);
        res.evaluations += 15;
        work.push_back({cuts[i], cuts[i + 1], v, e});
        total += v;
        total_err += e;
    }

    int panels = static_cast<int>(work.size());
    while (!work.empty()) {
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        // Pick the worst interval.
        size_t worst = 0;
        for (size_t i = 1; i < work.size(); ++i)
            if (work[i].error > work[worst].error) worst = i;
        if (total_err <= tol) break;
        if (panels >= opt.max_panels) {
            res.converged = false;
            break;
        }
        const Interval iv = work[worst];
        work.erase(work.begin() + static_cast<long>(worst));
        total -= iv.value;
        total_err -= iv.error;
        const double mid = 0.5 * (iv.a + iv.b);
        double e1, e2;
        const double v1 = detail::gk15_panel(f, iv.a, mid, e1);
        const double v2 = detail::gk15_panel(f, mid, iv.b, e2);
        res.evaluations += 30;
        work.push_back({iv.a, mid, v1, e1});
        work.push_back({mid, iv.b, v2, e2});
        total += v1 + v2;
        total_err += e1 + e2;
        ++panels;
    }

    res.value = total;
    res.error = total_err;
    return res;
}

struct RealLineOptions {
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    int max_panels = 4000;
    // Seed extra panels within |w| <= focus_halfwidth (0 disables); used to
    // resolve the narrow resonance peak near threshold.
    double focus_halfwidth = 0.0;
};

// integral of f(w) over the whole real line via w = alpha * tan(u),
// u in (-pi/2, pi/2).  alpha sets the scale of the integrand's features.
template <class F>
QuadratureResult integrate_real_line(const F& f, double alpha,
                                     const RealLineOptions& opt = {}) {
    if (!(alpha > 0.0)) throw DomainError("real-line quadrature scale must be positive");
    auto g = [&](double u) {
        const double c = std::cos(u);
        const double w = alpha * std::tan(u);
        return f(w) * alpha / (c * c);
    };
    const double half_pi = std::asin(1.0);
    QuadratureOptions qopt;
    qopt.rel_tol = opt.rel_tol;
    qopt.abs_tol = opt.abs_tol;
    qopt.max_panels = opt.max_panels;
    // Always resolve the central feature scale.
    for (double s : {-1.0, 1.0}) {
        qopt.breakpoints.push_back(s * std::atan(1.0));
        if (opt.focus_halfwidth > 0.0) {
            const double uf = std::atan(opt.focus_halfwidth / alpha);
            qopt.breakpoints.push_back(s * uf);
            qopt.breakpoints.push_back(s * 0.5 * uf);
        }
    }
    return integrate_adaptive(g, -half_pi, half_pi, qopt);
}

} // namespace pmesim
