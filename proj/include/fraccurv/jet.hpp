#pragma once

#include <cmath>

#include "fraccurv/common.hpp"

namespace fraccurv {

// Order-2 Taylor jet in one variable: value, first and second derivative.
// Arithmetic follows the truncated-Taylor composition rules; the jet of a
// constant has d1 = d2 = 0 and the jet of the variable itself is (t, 1, 0).
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    Jet2() = default;
    Jet2(double value) : v(value) {}
    Jet2(double value, double first, double second) : v(value), d1(first), d2(second) {}

    static Jet2 variable(double t) { return Jet2(t, 1.0, 0.0); }

    bool is_constant() const { return d1 == 0.0 && d2 == 0.0; }
};

inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2}; }

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    const double w = a.v / b.v;
    const double w1 = (a.d1 - w * b.d1) / b.v;
    const double w2 = (a.d2 - 2.0 * w1 * b.d1 - w * b.d2) / b.v;
    return {w, w1, w2};
}

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return {e, e * a.d1, e * (a.d2 + a.d1 * a.d1)};
}

inline Jet2 log(const Jet2& a) {
    if (a.v <= 0.0) throw DomainError("ln of non-positive argument");
    const double w1 = a.d1 / a.v;
    return {std::log(a.v), w1, a.d2 / a.v - w1 * w1};
}

inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return {s, c * a.d1, c * a.d2 - s * a.d1 * a.d1};
}

inline Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return {c, -s * a.d1, -s * a.d2 - c * a.d1 * a.d1};
}

// pow with constant exponent. Requires base > 0 unless the exponent is a
// non-negative integer (then the polynomial rule applies for any base).
inline Jet2 pow(const Jet2& f, double c) {
    if (f.is_constant()) {
        const double w = std::pow(f.v, c);
        if (!std::isfinite(w)) throw DomainError("pow: result not finite");
        return {w, 0.0, 0.0};
    }
    const bool int_exp = (c == std::floor(c));
    if (f.v <= 0.0 && !(int_exp && c >= 0.0))
        throw DomainError("pow of non-positive base with non-integer exponent");
    const double w = std::pow(f.v, c);
    const double p1 = c * std::pow(f.v, c - 1.0);
    const double p2 = c * (c - 1.0) * std::pow(f.v, c - 2.0);
    return {w, p1 * f.d1, p2 * f.d1 * f.d1 + p1 * f.d2};
}

// General pow: constant exponents use the power rule, non-constant exponents
// go through exp(g ln f), which needs f > 0 at the point.
inline Jet2 pow(const Jet2& f, const Jet2& g) {
    if (g.is_constant()) return pow(f, g.v);
    if (f.v <= 0.0) throw DomainError("pow with non-constant exponent requires positive base");
    return exp(g * log(f));
}

// Gamma of a constant-in-t argument only; derivatives of gamma (digamma)
// are unsupported.
inline Jet2 tgamma(const Jet2& a) {
    if (!a.is_constant()) throw DomainError("gamma of a non-constant argument is unsupported");
    if (a.v <= 0.0 || !std::isfinite(a.v)) throw DomainError("gamma of non-positive argument");
    const double g = std::tgamma(a.v);
    if (!std::isfinite(g)) throw OverflowError("gamma overflow");
    return {g, 0.0, 0.0};
}

// Order-2 jet in two independent directions u, w: value, both first partials
// and the three second partials. Used to harvest mixed second derivatives of
// metric components.
struct Jet22 {
    double v = 0.0;
    double du = 0.0, dw = 0.0;
    double duu = 0.0, duw = 0.0, dww = 0.0;

    Jet22() = default;
    Jet22(double value) : v(value) {}

    static Jet22 variable_u(double x) {
        Jet22 j(x);
        j.du = 1.0;
        return j;
    }
    static Jet22 variable_w(double x) {
        Jet22 j(x);
        j.dw = 1.0;
        return j;
    }
    // Both directions perturb the same coordinate.
    static Jet22 variable_uw(double x) {
        Jet22 j(x);
        j.du = j.dw = 1.0;
        return j;
    }

    bool is_constant() const {
        return du == 0.0 && dw == 0.0 && duu == 0.0 && duw == 0.0 && dww == 0.0;
    }
};

inline Jet22 operator-(const Jet22& a) {
    Jet22 r;
    r.v = -a.v; r.du = -a.du; r.dw = -a.dw;
    r.duu = -a.duu; r.duw = -a.duw; r.dww = -a.dww;
    return r;
}

inline Jet22 operator+(const Jet22& a, const Jet22& b) {
    Jet22 r;
    r.v = a.v + b.v; r.du = a.du + b.du; r.dw = a.dw + b.dw;
    r.duu = a.duu + b.duu; r.duw = a.duw + b.duw; r.dww = a.dww + b.dww;
    return r;
}

inline Jet22 operator-(const Jet22& a, const Jet22& b) { return a + (-b); }

inline Jet22 operator*(const Jet22& a, const Jet22& b) {
    Jet22 r;
    r.v = a.v * b.v;
    r.du = a.du * b.v + a.v * b.du;
    r.dw = a.dw * b.v + a.v * b.dw;
    r.duu = a.duu * b.v + 2.0 * a.du * b.du + a.v * b.duu;
    r.duw = a.duw * b.v + a.du * b.dw + a.dw * b.du + a.v * b.duw;
    r.dww = a.dww * b.v + 2.0 * a.dw * b.dw + a.v * b.dww;
    return r;
}

// Composition with a scalar function given by value/first/second derivative
// at a.v (univariate chain rule in each direction pair).
inline Jet22 compose(const Jet22& a, double f0, double f1, double f2) {
    Jet22 r;
    r.v = f0;
    r.du = f1 * a.du;
    r.dw = f1 * a.dw;
    r.duu = f2 * a.du * a.du + f1 * a.duu;
    r.duw = f2 * a.du * a.dw + f1 * a.duw;
    r.dww = f2 * a.dw * a.dw + f1 * a.dww;
    return r;
}

inline Jet22 operator/(const Jet22& a, const Jet22& b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    return a * compose(b, 1.0 / b.v, -1.0 / (b.v * b.v), 2.0 / (b.v * b.v * b.v));
}

inline Jet22 exp(const Jet22& a) {
    const double e = std::exp(a.v);
    return compose(a, e, e, e);
}

inline Jet22 log(const Jet22& a) {
    if (a.v <= 0.0) throw DomainError("ln of non-positive argument");
    return compose(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}

inline Jet22 sin(const Jet22& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return compose(a, s, c, -s);
}

inline Jet22 cos(const Jet22& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return compose(a, c, -s, -c);
}

inline Jet22 pow(const Jet22& f, double c) {
    if (f.is_constant()) {
        const double w = std::pow(f.v, c);
        if (!std::isfinite(w)) throw DomainError("pow: result not finite");
        return Jet22(w);
    }
    const bool int_exp = (c == std::floor(c));
    if (f.v <= 0.0 && !(int_exp && c >= 0.0))
        throw DomainError("pow of non-positive base with non-integer exponent");
    return compose(f, std::pow(f.v, c), c * std::pow(f.v, c - 1.0),
                   c * (c - 1.0) * std::pow(f.v, c - 2.0));
}

inline Jet22 pow(const Jet22& f, const Jet22& g) {
    if (g.is_constant()) return pow(f, g.v);
    if (f.v <= 0.0) throw DomainError("pow with non-constant exponent requires positive base");
    return exp(g * log(f));
}

inline Jet22 tgamma(const Jet22& a) {
    if (!a.is_constant()) throw DomainError("gamma of a non-constant argument is unsupported");
    if (a.v <= 0.0 || !std::isfinite(a.v)) throw DomainError("gamma of non-positive argument");
    const double g = std::tgamma(a.v);
    if (!std::isfinite(g)) throw OverflowError("gamma overflow");
    return Jet22(g);
}

}  // namespace fraccurv
