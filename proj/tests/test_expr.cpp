#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fraccurv/expr.hpp"

using namespace fraccurv;

namespace {

// Central finite differences at step h, the independent check on jet
// derivatives.
double fd1(const Expr& e, double t, const std::map<std::string, double>& b, double h = 1e-5) {
    return (eval_jet2(e, t + h, b).v - eval_jet2(e, t - h, b).v) / (2.0 * h);
}

double fd2(const Expr& e, double t, const std::map<std::string, double>& b, double h = 1e-5) {
    return (eval_jet2(e, t + h, b).v - 2.0 * eval_jet2(e, t, b).v + eval_jet2(e, t - h, b).v)
           / (h * h);
}

// Random expressions over a pole-free sub-grammar: polynomials in t combined
// with sin, cos, exp of bounded arguments and products/sums.
Expr random_safe_expr(std::mt19937& rng, int depth) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const int pick = depth <= 0 ? static_cast<int>(rng() % 2) : static_cast<int>(rng() % 7);
    switch (pick) {
        case 0: return Expr::number(coef(rng));
        case 1: return Expr::var("t");
        case 2: return Expr::binary(BinOp::Add, random_safe_expr(rng, depth - 1),
                                    random_safe_expr(rng, depth - 1));
        case 3: return Expr::binary(BinOp::Mul, random_safe_expr(rng, depth - 1),
                                    random_safe_expr(rng, depth - 1));
        case 4: return Expr::unary(UnaryOp::Sin, random_safe_expr(rng, depth - 1));
        case 5: return Expr::unary(UnaryOp::Cos, random_safe_expr(rng, depth - 1));
        default: {
            // exp of a damped argument to keep values in range
            Expr inner = Expr::binary(BinOp::Mul, Expr::number(0.2),
                                      Expr::unary(UnaryOp::Sin, random_safe_expr(rng, depth - 1)));
            return Expr::unary(UnaryOp::Exp, inner);
        }
    }
}

}  // namespace

TEST_CASE("parse structure") {
    Expr e = Expr::parse("t^(1-a)");
    Expr expected = Expr::binary(BinOp::Pow, Expr::var("t"),
                                 Expr::binary(BinOp::Sub, Expr::number(1.0), Expr::var("a")));
    CHECK(e == expected);

    Expr m = Expr::parse("t^(1-a)/gamma(1+b)");
    Expr expected_m = Expr::binary(
        BinOp::Div, expected,
        Expr::unary(UnaryOp::Gamma,
                    Expr::binary(BinOp::Add, Expr::number(1.0), Expr::var("b"))));
    CHECK(m == expected_m);
}

TEST_CASE("parse errors carry offsets") {
    try {
        Expr::parse("1+");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(Expr::parse(""), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(1)"), ParseError);  // unknown function
    CHECK_THROWS_AS(Expr::parse("(1+2"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
}

TEST_CASE("whitespace insensitivity and precedence") {
    CHECK(Expr::parse(" 1 + 2 * t ") == Expr::parse("1+2*t"));
    // ^ binds tighter than * and is right-associative
    CHECK(Expr::parse("2*t^2") == Expr::binary(BinOp::Mul, Expr::number(2.0),
                                               Expr::binary(BinOp::Pow, Expr::var("t"),
                                                            Expr::number(2.0))));
    CHECK(Expr::parse("2^3^2") ==
          Expr::binary(BinOp::Pow, Expr::number(2.0),
                       Expr::binary(BinOp::Pow, Expr::number(3.0), Expr::number(2.0))));
    CHECK(eval_jet2(Expr::parse("2^3^2"), 1.0, {}).v == doctest::Approx(512.0));
}

TEST_CASE("numbers with exponents") {
    CHECK(eval_jet2(Expr::parse("1.5e2"), 1.0, {}).v == doctest::Approx(150.0));
    CHECK(eval_jet2(Expr::parse("2.5e-1"), 1.0, {}).v == doctest::Approx(0.25));
}

TEST_CASE("eval_jet2 examples") {
    // d/dt t^{1-a} = (1-a) t^{-a}; d2 = -a(1-a) t^{-a-1}
    Jet2 j = eval_jet2(Expr::parse("t^(1-a)"), 1.0, {{"a", 0.5}});
    CHECK(j.v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j.d1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(j.d2 == doctest::Approx(-0.25).epsilon(1e-14));

    Jet2 c = eval_jet2(Expr::parse("gamma(1+b)"), 2.0, {{"b", 1.0}});
    CHECK(c.v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.d1 == 0.0);
    CHECK(c.d2 == 0.0);

    Jet2 idj = eval_jet2(Expr::parse("t"), 3.7, {});
    CHECK(idj.v == 3.7);
    CHECK(idj.d1 == 1.0);
    CHECK(idj.d2 == 0.0);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(eval_jet2(Expr::parse("ln(t)"), -1.0, {}), DomainError);
    CHECK_THROWS_AS(eval_jet2(Expr::parse("1/(t-1)"), 1.0, {}), DomainError);
    CHECK_THROWS_AS(eval_jet2(Expr::parse("gamma(-1)"), 1.0, {}), DomainError);
    CHECK_THROWS_AS(eval_jet2(Expr::parse("t^0.5"), -2.0, {}), DomainError);
    CHECK_THROWS_AS(eval_jet2(Expr::parse("x"), 1.0, {}), UnboundParameter);
    // gamma of a non-constant argument has no derivative support
    CHECK_THROWS_AS(eval_jet2(Expr::parse("gamma(t)"), 2.0, {}), DomainError);
}

TEST_CASE("print then reparse is structurally identical") {
    const std::vector<std::string> corpus = {
        "t^(1-a)", "t^(1-a)/gamma(1+b)", "-t^2+3*t-1", "sin(t)*cos(t)",
        "exp(-t)*ln(t+1)", "1+t^2", "2.5e-1*t"};
    for (const auto& s : corpus) {
        Expr e = Expr::parse(s);
        CHECK(Expr::parse(e.str()) == e);
    }

    std::mt19937 rng(101);
    for (int i = 0; i < 1000; ++i) {
        Expr e = random_safe_expr(rng, 4);
        CHECK(Expr::parse(e.str()) == e);
    }
}

TEST_CASE("jet derivatives match finite differences on random expressions") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ts(0.5, 2.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Expr e = random_safe_expr(rng, 4);
        const double t = ts(rng);
        const Jet2 j = eval_jet2(e, t, {});
        const double scale1 = std::max(1.0, std::fabs(j.d1));
        const double scale2 = std::max(1.0, std::fabs(j.d2));
        CHECK(std::fabs(fd1(e, t, {}) - j.d1) / scale1 <= 1e-6);
        // Second central differences at h=1e-5 carry rounding noise of order
        // eps|f|/h^2 ~ 1e-5, so d2 gets a correspondingly looser bound than d1.
        CHECK(std::fabs(fd2(e, t, {}) - j.d2) / scale2 <= 1e-4);
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("product rule holds exactly in jets") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> ts(0.5, 2.0);
    for (int i = 0; i < 500; ++i) {
        Expr f = random_safe_expr(rng, 3);
        Expr g = random_safe_expr(rng, 3);
        const double t = ts(rng);
        const Jet2 jf = eval_jet2(f, t, {});
        const Jet2 jg = eval_jet2(g, t, {});
        const Jet2 jfg = eval_jet2(Expr::binary(BinOp::Mul, f, g), t, {});
        const double expect = jf.d1 * jg.v + jf.v * jg.d1;
        const double scale = std::max(1.0, std::fabs(expect));
        CHECK(std::fabs(jfg.d1 - expect) / scale <= 1e-12);
        // linearity
        const Jet2 jsum = eval_jet2(Expr::binary(BinOp::Add, f, g), t, {});
        CHECK(jsum.d1 == doctest::Approx(jf.d1 + jg.d1).epsilon(1e-12));
    }
}

TEST_CASE("check_idents") {
    Expr e = Expr::parse("t^(1-a)");
    CHECK_NOTHROW(e.check_idents({"t", "a"}));
    CHECK_THROWS_AS(e.check_idents({"t"}), UnboundParameter);
}
