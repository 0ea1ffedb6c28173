#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fraccurv/fracderiv.hpp"
#include "fraccurv/spec_parse.hpp"

using namespace fraccurv;

namespace {

ScalarFunction fn_square() { return ScalarFunction::from_text("t^2"); }
ScalarFunction fn_sin() { return ScalarFunction::from_text("sin(t)"); }
ScalarFunction fn_exp() { return ScalarFunction::from_text("exp(t)"); }

}  // namespace

TEST_CASE("v_coefficient closed forms") {
    MLParams ones;
    // All parameters 1: Gamma(1)(1)_1/(Gamma(2)(1)_1) = 1, so c(t) = t^{1-alpha}.
    CHECK(v_coefficient(ones, 0.5, 4.0) == doctest::Approx(2.0).epsilon(1e-13));

    MLParams mp;
    mp.beta = 2.0;
    // Gamma(2)*1 / (Gamma(3)*1) = 1/2 at t = 1, alpha = 1.
    CHECK(v_coefficient(mp, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));

    // t = 1 makes the power factor exactly 1 for any alpha.
    MLParams mp2;
    mp2.gamma = 1.3;
    mp2.beta = 0.7;
    mp2.rho = 2.1;
    mp2.delta = 0.9;
    mp2.p = 1.4;
    mp2.q = 0.6;
    const double expect = gamma_fn(mp2.beta) * pochhammer(mp2.rho, mp2.q, 1)
                          / (gamma_fn(mp2.gamma + mp2.beta) * pochhammer(mp2.delta, mp2.p, 1));
    CHECK(v_coefficient(mp2, 1.0, 1.0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("make_operator coefficient kinds") {
    auto conf = make_operator(OperatorKind::Conformable, 0.5);
    CHECK(conf.coeff.value(4.0) == doctest::Approx(2.0).epsilon(1e-13));

    // truncated-M with beta = 1: Gamma(2) = 1 so same coefficient as conformable
    auto tm = make_operator(OperatorKind::TruncatedM, 0.5, {{"beta", 1.0}});
    CHECK(tm.coeff.value(4.0) == doctest::Approx(2.0).epsilon(1e-13));

    auto alt = make_operator(OperatorKind::Alternative, 0.25);
    CHECK(alt.coeff.value(16.0) == doctest::Approx(std::pow(16.0, 0.75)).epsilon(1e-13));

    CHECK_THROWS_AS(make_operator(OperatorKind::Conformable, 1.5), InvalidParameter);
    CHECK_THROWS_AS(make_operator(OperatorKind::Conformable, 0.0), InvalidParameter);
    CHECK_THROWS_AS(make_operator(OperatorKind::TruncatedM, 0.5), InvalidParameter);
    CHECK_THROWS_AS(make_operator(OperatorKind::TruncatedV, 0.5), InvalidParameter);
    MLParams bad;
    bad.rho = -1.0;
    CHECK_THROWS_AS(make_operator(OperatorKind::TruncatedV, 0.5, {}, bad), InvalidParameter);
}

TEST_CASE("coefficient positivity is enforced") {
    // c(t) = t - 5 is negative on part of (0, 10): rejected at construction.
    CHECK_THROWS_AS(CoefficientFunction(0.5, Expr::parse("t-5"), {}, 0.0, 10.0), DomainError);
}

TEST_CASE("apply") {
    auto conf05 = make_operator(OperatorKind::Conformable, 0.5);
    // t^{0.5} * 2t = 2 t^{1.5} = 16 at t = 4
    CHECK(apply(conf05, fn_square(), 4.0) == doctest::Approx(16.0).epsilon(1e-13));

    CHECK(apply(conf05, ScalarFunction::from_text("3.25"), 2.0) == 0.0);

    auto conf1 = make_operator(OperatorKind::Conformable, 1.0);
    CHECK(apply(conf1, fn_sin(), 1.3) == doctest::Approx(std::cos(1.3)).epsilon(1e-13));
}

TEST_CASE("apply_limit_def agrees with the closed form") {
    MLParams ones;
    ones.trunc = 1;
    const LimitResult r = apply_limit_def(ones, 0.5, fn_square(), 4.0);
    CHECK(std::fabs(r.value - 16.0) <= 1e-6);

    // constant function: the quotient is identically zero
    const LimitResult rc = apply_limit_def(ones, 0.5, ScalarFunction::from_text("7"), 2.0);
    CHECK(rc.value == doctest::Approx(0.0));

    // alpha = 1, all parameters 1, f(t) = t: the ordinary difference quotient
    const LimitResult r1 = apply_limit_def(ones, 1.0, ScalarFunction::from_text("t"), 2.0);
    CHECK(std::fabs(r1.value - 1.0) <= 1e-8);
}

TEST_CASE("limit definition vs closed form over the full grid") {
    MLParams sets[2];
    sets[0].trunc = 3;
    sets[1].gamma = 0.8;
    sets[1].beta = 1.7;
    sets[1].rho = 1.2;
    sets[1].delta = 2.3;
    sets[1].p = 0.9;
    sets[1].q = 1.1;
    sets[1].trunc = 5;
    const ScalarFunction fs[3] = {fn_square(), fn_sin(), fn_exp()};
    for (const auto& mp : sets)
        for (const auto& f : fs)
            for (double t : {0.5, 1.0, 2.0})
                for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
                    auto op = make_operator(OperatorKind::TruncatedV, alpha, {}, mp);
                    const double closed = apply(op, f, t);
                    const LimitResult lim = apply_limit_def(mp, alpha, f, t);
                    const double scale = std::max(1.0, std::fabs(closed));
                    CHECK(std::fabs(lim.value - closed) / scale <= 1e-6);
                }
}

TEST_CASE("value_at_zero") {
    auto conf05 = make_operator(OperatorKind::Conformable, 0.5);
    CHECK(std::fabs(value_at_zero(conf05, fn_square())) <= 1e-6);

    auto conf1 = make_operator(OperatorKind::Conformable, 1.0);
    CHECK(value_at_zero(conf1, ScalarFunction::from_text("t")) == doctest::Approx(1.0));

    // c f' = 0.25 t^{-0.25} diverges as t -> 0+
    CHECK_THROWS_AS(value_at_zero(conf05, ScalarFunction::from_text("t^0.25")),
                    NonConvergence);
}

TEST_CASE("operator algebra: linearity, Leibniz, chain") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_real_distribution<double> ts(0.5, 3.0);
    std::uniform_real_distribution<double> alphas(0.05, 1.0);

    for (int trial = 0; trial < 1000; ++trial) {
        const double alpha = alphas(rng);
        auto op = make_operator(OperatorKind::Conformable, alpha);
        const double t = ts(rng);
        const double a = coef(rng), b = coef(rng);
        const double c1 = coef(rng), c2 = coef(rng);

        ScalarFunction f([c1](double x) {
            return Jet2(c1) * fraccurv::sin(Jet2::variable(x)) + Jet2::variable(x) * Jet2::variable(x);
        });
        ScalarFunction g([c2](double x) {
            return fraccurv::exp(Jet2(0.3) * fraccurv::cos(Jet2::variable(x))) + Jet2(c2);
        });

        // linearity
        ScalarFunction af_bg([&, a, b](double x) { return Jet2(a) * f(x) + Jet2(b) * g(x); });
        const double lhs = apply(op, af_bg, t);
        const double rhs = a * apply(op, f, t) + b * apply(op, g, t);
        CHECK(std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)) <= 1e-12);

        // Leibniz
        ScalarFunction fg([&](double x) { return f(x) * g(x); });
        const double leib_lhs = apply(op, fg, t);
        const double leib_rhs = f.value(t) * apply(op, g, t) + g.value(t) * apply(op, f, t);
        CHECK(std::fabs(leib_lhs - leib_rhs) / std::max(1.0, std::fabs(leib_rhs)) <= 1e-12);

        // chain rule in operator form: D^alpha (f o g)(t) = f'(g(t)) D^alpha g(t)
        ScalarFunction fog([&](double x) {
            const Jet2 gx = g(x);
            const Jet2 fv = f(gx.v);
            // compose jets: (f o g)' = f'(g) g'
            return Jet2(fv.v, fv.d1 * gx.d1,
                        fv.d2 * gx.d1 * gx.d1 + fv.d1 * gx.d2);
        });
        const double chain_lhs = apply(op, fog, t);
        const double chain_rhs = f(g.value(t)).d1 * apply(op, g, t);
        CHECK(std::fabs(chain_lhs - chain_rhs) / std::max(1.0, std::fabs(chain_rhs)) <= 1e-12);
    }
}

TEST_CASE("conformable at alpha = 1 is the ordinary derivative") {
    auto op = make_operator(OperatorKind::Conformable, 1.0);
    for (double t : {0.3, 1.0, 2.5}) {
        CHECK(apply(op, fn_exp(), t) == doctest::Approx(std::exp(t)).epsilon(1e-13));
        CHECK(op.coeff.value(t) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("operator spec strings") {
    auto op = parse_operator_spec("truncated-m:beta=2", 0.5);
    CHECK(op.kind == OperatorKind::TruncatedM);
    CHECK(op.coeff.value(4.0) == doctest::Approx(2.0 / gamma_fn(3.0)).epsilon(1e-13));

    auto tv = parse_operator_spec(
        "truncated-v:gamma=1,beta=1,rho=1,delta=1,p=1,q=1,trunc=2", 0.5);
    CHECK(tv.kind == OperatorKind::TruncatedV);
    CHECK(tv.ml.has_value());
    CHECK(tv.coeff.value(4.0) == doctest::Approx(2.0).epsilon(1e-13));

    auto cu = parse_operator_spec("custom:1+t^2", 0.5);
    CHECK(cu.coeff.value(2.0) == doctest::Approx(5.0).epsilon(1e-14));

    CHECK_THROWS_AS(parse_operator_spec("bogus", 0.5), InvalidParameter);
    CHECK_THROWS_AS(parse_operator_spec("truncated-v:gamma=1", 0.5), InvalidParameter);
}
