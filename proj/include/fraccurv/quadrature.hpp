#pragma once

#include <cmath>
#include <functional>

#include "fraccurv/common.hpp"

namespace fraccurv {

namespace detail {

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
inline constexpr double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898,  0.0,                0.207784955007898,
     0.405845151377397,  0.586087235467691,  0.741531185599394,
     0.864864423359769,  0.949107912342759,  0.991455371120813};

inline constexpr double kKronrodWeights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};

inline constexpr double kGaussWeights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct GKEstimate {
    double kronrod;
    double err;
};

inline GKEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double kr = 0.0, gs = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double fx = f(c + h * kGK15Nodes[i]);
        kr += kKronrodWeights[i] * fx;
        if (i % 2 == 1) gs += kGaussWeights[i / 2] * fx;
    }
    kr *= h;
    gs *= h;
    return {kr, std::fabs(kr - gs)};
}

inline double integrate_rec(const std::function<double(double)>& f, double a, double b,
                            double abstol, int depth) {
    const GKEstimate e = gk15(f, a, b);
    if (e.err <= abstol || !std::isfinite(e.err)) {
        if (!std::isfinite(e.kronrod))
            throw DomainError("quadrature failure: non-finite integrand");
        return e.kronrod;
    }
    if (depth >= 52)
        throw DomainError("quadrature failure: refinement limit reached "
                          "(non-integrable singularity approached?)");
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * abstol, depth + 1)
           + integrate_rec(f, m, b, 0.5 * abstol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature with interval bisection, to absolute
// tolerance abstol. The nodes are interior, so integrable endpoint
// singularities converge.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double abstol = 1.0e-10) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, abstol);
    return detail::integrate_rec(f, a, b, abstol, 0);
}

}  // namespace fraccurv
