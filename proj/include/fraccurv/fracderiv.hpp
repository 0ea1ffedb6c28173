#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraccurv/common.hpp"
#include "fraccurv/expr.hpp"
#include "fraccurv/jet.hpp"
#include "fraccurv/mittag_leffler.hpp"

namespace fraccurv {

// A positive C^2 coefficient function c(t) on an open interval of R+,
// bound to a fractional order alpha. Positivity is spot-checked on a
// deterministic grid at construction and enforced at every evaluation.
class CoefficientFunction {
public:
    CoefficientFunction(double alpha, Expr expr, std::map<std::string, double> bindings,
                        double lo = 0.0, double hi = 1.0e6)
        : alpha_(alpha), expr_(std::move(expr)), bindings_(std::move(bindings)),
          lo_(lo), hi_(hi) {
        if (!(alpha > 0.0) || alpha > 1.0)
            throw InvalidParameter("alpha must lie in (0, 1]");
        if (!(lo >= 0.0) || !(lo < hi))
            throw InvalidParameter("domain must satisfy 0 <= lo < hi");
        spot_check();
    }

    double alpha() const { return alpha_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const Expr& expr() const { return expr_; }
    const std::map<std::string, double>& bindings() const { return bindings_; }

    bool contains(double t) const { return t > lo_ && t < hi_; }

    // c(t) with first and second derivative; throws DomainError outside the
    // domain or where c fails to be positive.
    Jet2 jet(double t) const {
        if (!contains(t))
            throw DomainError("coefficient argument t = " + std::to_string(t)
                              + " outside domain (" + std::to_string(lo_) + ", "
                              + std::to_string(hi_) + ")");
        Jet2 j = eval_jet2(expr_, t, bindings_);
        if (!(j.v > 0.0) || !std::isfinite(j.v))
            throw DomainError("coefficient function is not positive at t = " + std::to_string(t));
        return j;
    }

    double value(double t) const { return jet(t).v; }

private:
    void spot_check() const {
        const double window_hi = std::min(hi_, lo_ + 10.0);
        const int samples = 17;
        for (int i = 0; i < samples; ++i) {
            const double t = lo_ + (window_hi - lo_) * (i + 0.5) / samples;
            jet(t);  // throws if not positive or not evaluable
        }
    }

    double alpha_;
    Expr expr_;
    std::map<std::string, double> bindings_;
    double lo_, hi_;
};

// A jet-evaluable scalar function t -> f(t).
class ScalarFunction {
public:
    explicit ScalarFunction(std::function<Jet2(double)> fn) : fn_(std::move(fn)) {}

    static ScalarFunction from_expr(Expr e, std::map<std::string, double> bindings = {}) {
        return ScalarFunction([e = std::move(e), b = std::move(bindings)](double t) {
            return eval_jet2(e, t, b);
        });
    }

    static ScalarFunction from_text(const std::string& text,
                                    std::map<std::string, double> bindings = {}) {
        return from_expr(Expr::parse(text), std::move(bindings));
    }

    Jet2 operator()(double t) const { return fn_(t); }
    double value(double t) const { return fn_(t).v; }
    double deriv(double t) const { return fn_(t).d1; }

private:
    std::function<Jet2(double)> fn_;
};

enum class OperatorKind { Conformable, Alternative, TruncatedM, TruncatedV, Custom };

// Coefficient of the closed-form truncated V-derivative:
//   t^{1-alpha} Gamma(beta) (rho)_q / (Gamma(gamma+beta) (delta)_p).
inline double v_coefficient(const MLParams& mp, double alpha, double t) {
    mp.validate();
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidParameter("alpha must lie in (0, 1]");
    if (!(t > 0.0)) throw DomainError("v_coefficient: t must be positive");
    const double num = gamma_fn(mp.beta) * pochhammer(mp.rho, mp.q, 1);
    const double den = gamma_fn(mp.gamma + mp.beta) * pochhammer(mp.delta, mp.p, 1);
    return std::pow(t, 1.0 - alpha) * num / den;
}

// A named local fractional derivative d^alpha/dt^alpha = c(t) d/dt.
struct LocalFractionalOperator {
    OperatorKind kind;
    CoefficientFunction coeff;
    std::optional<MLParams> ml;  // present iff kind == TruncatedV
};

// Builds the named operators from their closed-form coefficients.
// `extra` supplies beta for TruncatedM; TruncatedV takes a full MLParams.
inline LocalFractionalOperator make_operator(OperatorKind kind, double alpha,
                                             const std::map<std::string, double>& extra = {},
                                             std::optional<MLParams> ml = std::nullopt,
                                             double lo = 0.0, double hi = 1.0e6) {
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidParameter("alpha must lie in (0, 1]");
    switch (kind) {
        case OperatorKind::Conformable:
        case OperatorKind::Alternative: {
            // The alternative derivative reduces to the same closed-form
            // coefficient t^{1-alpha} as the conformable one.
            Expr e = Expr::parse("t^(1-a)");
            return {kind, CoefficientFunction(alpha, e, {{"a", alpha}}, lo, hi), std::nullopt};
        }
        case OperatorKind::TruncatedM: {
            auto it = extra.find("beta");
            if (it == extra.end()) throw InvalidParameter("truncated-M operator requires beta");
            if (!(it->second > 0.0)) throw InvalidParameter("beta must be positive");
            Expr e = Expr::parse("t^(1-a)/gamma(1+b)");
            return {kind,
                    CoefficientFunction(alpha, e, {{"a", alpha}, {"b", it->second}}, lo, hi),
                    std::nullopt};
        }
        case OperatorKind::TruncatedV: {
            if (!ml) throw InvalidParameter("truncated-V operator requires ML parameters");
            ml->validate();
            const double k = v_coefficient(*ml, alpha, 1.0);
            Expr e = Expr::binary(BinOp::Mul, Expr::number(k), Expr::parse("t^(1-a)"));
            return {kind, CoefficientFunction(alpha, e, {{"a", alpha}}, lo, hi), ml};
        }
        case OperatorKind::Custom:
            throw InvalidParameter("Custom operators are built from an explicit coefficient");
    }
    throw InvalidParameter("unknown operator kind");
}

inline LocalFractionalOperator make_custom_operator(CoefficientFunction coeff) {
    return {OperatorKind::Custom, std::move(coeff), std::nullopt};
}

// d^alpha f / dt^alpha = c(t) f'(t).
inline double apply(const LocalFractionalOperator& op, const ScalarFunction& f, double t) {
    return op.coeff.value(t) * f(t).d1;
}

inline std::vector<double> default_eps_schedule() {
    std::vector<double> s;
    for (int k = 0; k <= 6; ++k) s.push_back(1.0e-2 * std::pow(2.0, -k));
    return s;
}

inline std::vector<double> default_t_schedule() {
    std::vector<double> s;
    for (int k = 1; k <= 8; ++k) s.push_back(std::pow(10.0, -k));
    return s;
}

struct LimitResult {
    double value;
    double tol_achieved;
};

// Evaluates the defining limit
//   lim_{eps->0} [f(t H(eps t^{-alpha})) - f(t)] / eps
// over a decreasing eps schedule, with two levels of Richardson
// extrapolation at ratio 2.
inline LimitResult apply_limit_def(const MLParams& mp, double alpha, const ScalarFunction& f,
                                   double t, std::vector<double> eps_schedule = {},
                                   double tol = 1.0e-7) {
    mp.validate();
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidParameter("alpha must lie in (0, 1]");
    if (!(t > 0.0)) throw DomainError("apply_limit_def: t must be positive");
    if (eps_schedule.empty()) eps_schedule = default_eps_schedule();
    if (eps_schedule.size() < 3)
        throw InvalidParameter("eps schedule needs at least 3 entries");
    for (std::size_t i = 1; i < eps_schedule.size(); ++i)
        if (!(eps_schedule[i] < eps_schedule[i - 1]) || !(eps_schedule[i] > 0.0))
            throw InvalidParameter("eps schedule must be strictly decreasing and positive");

    const double f_t = f.value(t);
    std::vector<double> q;
    q.reserve(eps_schedule.size());
    for (double eps : eps_schedule) {
        const double arg = t * h_function(mp, eps * std::pow(t, -alpha));
        q.push_back((f.value(arg) - f_t) / eps);
    }
    // Richardson table, levels 1 and 2, assuming the ratio-2 schedule.
    std::vector<double> r1(q.size() - 1), r2;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) r1[i] = 2.0 * q[i + 1] - q[i];
    r2.resize(r1.size() - 1);
    for (std::size_t i = 0; i + 1 < r1.size(); ++i) r2[i] = (4.0 * r1[i + 1] - r1[i]) / 3.0;

    const double last = r2.back();
    const double prev = r2[r2.size() - 2];
    const double scale = std::max(1.0, std::fabs(last));
    const double achieved = std::fabs(last - prev) / scale;
    if (achieved > tol)
        throw NonConvergence("limit definition failed to stabilize", prev, last);
    return {last, achieved};
}

// Value of the operator at t = 0 taken as the right limit along a decreasing
// t schedule; converges when two consecutive evaluations agree to tol.
inline double value_at_zero(const LocalFractionalOperator& op, const ScalarFunction& f,
                            std::vector<double> t_schedule = {}, double tol = 1.0e-6) {
    if (t_schedule.empty()) t_schedule = default_t_schedule();
    for (std::size_t i = 1; i < t_schedule.size(); ++i)
        if (!(t_schedule[i] < t_schedule[i - 1]) || !(t_schedule[i] > 0.0))
            throw InvalidParameter("t schedule must be strictly decreasing and positive");
    double prev = apply(op, f, t_schedule[0]);
    double older = prev;
    for (std::size_t i = 1; i < t_schedule.size(); ++i) {
        const double cur = apply(op, f, t_schedule[i]);
        if (std::fabs(cur - prev) <= tol) return cur;
        older = prev;
        prev = cur;
    }
    throw NonConvergence("no numerical limit as t -> 0+", older, prev);
}

}  // namespace fraccurv
