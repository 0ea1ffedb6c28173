#pragma once

#include <cmath>
#include <string>

#include "fraccurv/common.hpp"

namespace fraccurv {

// Parameters of the truncated six-parameter Mittag-Leffler function,
// all restricted to positive reals, plus the truncation index.
struct MLParams {
    double gamma = 1.0;
    double beta = 1.0;
    double rho = 1.0;
    double delta = 1.0;
    double p = 1.0;
    double q = 1.0;
    int trunc = 0;

    void validate() const {
        auto check = [](double x, const char* name) {
            if (!(x > 0.0) || !std::isfinite(x))
                throw InvalidParameter(std::string("ML parameter '") + name
                                       + "' must be positive and finite");
        };
        check(gamma, "gamma");
        check(beta, "beta");
        check(rho, "rho");
        check(delta, "delta");
        check(p, "p");
        check(q, "q");
        if (trunc < 0) throw InvalidParameter("truncation index must be >= 0");
    }
};

inline double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("gamma_fn: argument must be positive and finite");
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) throw OverflowError("gamma_fn: overflow at x = " + std::to_string(x));
    return g;
}

inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("log_gamma: argument must be positive and finite");
    return std::lgamma(x);
}

// Generalized Pochhammer symbol (rho)_{qk} = Gamma(rho + q k) / Gamma(rho).
// Switches to log-space once the numerator argument would overflow tgamma.
inline double pochhammer(double rho, double q, int k) {
    if (!(rho > 0.0) || !(q > 0.0) || k < 0)
        throw DomainError("pochhammer: requires rho > 0, q > 0, k >= 0");
    const double arg = rho + q * static_cast<double>(k);
    if (arg < 170.0 && rho < 170.0) return gamma_fn(arg) / gamma_fn(rho);
    const double lg = log_gamma(arg) - log_gamma(rho);
    const double r = std::exp(lg);
    if (!std::isfinite(r)) throw OverflowError("pochhammer: overflow");
    return r;
}

// Truncated six-parameter Mittag-Leffler series
//   sum_{k=0}^{i} [(rho)_{qk} / (delta)_{pk}] z^k / Gamma(gamma k + beta),
// summed in forward order with Kahan compensation.
inline double ml_truncated(const MLParams& mp, double z) {
    mp.validate();
    if (!std::isfinite(z)) throw DomainError("ml_truncated: z must be finite");
    double sum = 0.0, comp = 0.0;
    for (int k = 0; k <= mp.trunc; ++k) {
        const double num_arg = mp.rho + mp.q * k;
        const double den_arg = mp.delta + mp.p * k;
        const double gam_arg = mp.gamma * k + mp.beta;
        double term;
        if (k == 0) {
            term = (gam_arg < 170.0) ? 1.0 / gamma_fn(gam_arg) : std::exp(-log_gamma(gam_arg));
        } else if (num_arg < 170.0 && den_arg < 170.0 && gam_arg < 170.0) {
            term = (pochhammer(mp.rho, mp.q, k) / pochhammer(mp.delta, mp.p, k))
                   * std::pow(z, k) / gamma_fn(gam_arg);
        } else {
            const double lg = log_gamma(num_arg) - log_gamma(mp.rho)
                              - log_gamma(den_arg) + log_gamma(mp.delta)
                              - log_gamma(gam_arg)
                              + static_cast<double>(k) * std::log(std::fabs(z));
            term = (z == 0.0) ? 0.0 : std::exp(lg);
            if (z < 0.0 && (k % 2) != 0) term = -term;
        }
        if (!std::isfinite(term))
            throw OverflowError("ml_truncated: term overflow at k = " + std::to_string(k));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// H-function of the limit definition: Gamma(beta) times the truncated series.
// H(0) = 1 up to rounding.
inline double h_function(const MLParams& mp, double z) {
    return gamma_fn(mp.beta) * ml_truncated(mp, z);
}

}  // namespace fraccurv
