#include "conecert/expr.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using conecert::Expr;
using conecert::Interval;
using conecert::NodeKind;
namespace cc = conecert;

namespace {

// Operators and operands, with a call and its arguments counted as one
// operand.
std::size_t operand_view_size(const cc::ExprNode& n)
{
    if (n.kind == NodeKind::call || n.args.empty()) {
        return 1;
    }
    std::size_t total = 1;
    for (const auto& a : n.args) {
        total += operand_view_size(*a);
    }
    return total;
}

} // namespace

TEST_CASE("parse: example trees")
{
    const Expr e = Expr::parse("0.5 + 5*phi(x1)*psi(x2)");
    // + ( 0.5, * ( * (5, phi(x1)), psi(x2) ) )
    const auto& root = e.root();
    REQUIRE(root.kind == NodeKind::add);
    CHECK(root.args[0]->kind == NodeKind::constant);
    CHECK(root.args[0]->value == 0.5);
    const auto& prod = *root.args[1];
    REQUIRE(prod.kind == NodeKind::mul);
    CHECK(prod.args[0]->kind == NodeKind::mul);
    CHECK(prod.args[1]->kind == NodeKind::call);
    CHECK(prod.args[1]->fn == cc::Builtin::psi);
    CHECK(prod.args[0]->args[1]->fn == cc::Builtin::phi);
    CHECK(operand_view_size(root) == 7);
    CHECK(e.node_count() == 9);

    const Expr v = Expr::parse("x1");
    CHECK(v.root().kind == NodeKind::variable);
    CHECK(v.root().var == 0);
    CHECK(v.node_count() == 1);

    const Expr c = Expr::parse("exp(-8/(1+x1))");
    REQUIRE(c.root().kind == NodeKind::call);
    CHECK(c.root().fn == cc::Builtin::exp);
    const auto& q = *c.root().args[0];
    CHECK(q.kind == NodeKind::div);
    CHECK(q.args[0]->kind == NodeKind::neg);
    CHECK(q.args[1]->kind == NodeKind::add);
}

TEST_CASE("precedence and associativity")
{
    CHECK(Expr::parse("-2^2").eval(0, 0) == -4.0);
    CHECK(Expr::parse("2^3^2").eval(0, 0) == 512.0);
    CHECK(Expr::parse("2^-1").eval(0, 0) == 0.5);
    CHECK(Expr::parse("8/4/2").eval(0, 0) == 1.0);
    CHECK(Expr::parse("1-2-3").eval(0, 0) == -4.0);
    CHECK(Expr::parse("1+2*3").eval(0, 0) == 7.0);
    CHECK(Expr::parse("(1+2)*3").eval(0, 0) == 9.0);
    CHECK(Expr::parse("x1^2/32").eval(4, 0) == 0.5);
    CHECK(Expr::parse("pi").eval(0, 0) == std::numbers::pi);
    CHECK(Expr::parse("1e-3 * x2").eval(0, 2) == 2e-3);
}

TEST_CASE("point evaluation")
{
    CHECK(Expr::parse("phi(x1)").eval(0.25, 0) == 0.0);
    CHECK(Expr::parse("0.5+5*phi(x1)*psi(x2)").eval(1, 1) == 5.5);
    CHECK(Expr::parse("capphi(x1)").eval(0.75, 0) == 0.5);
    CHECK(Expr::parse("min(x1, x2) + max(x1, x2)").eval(2, 3) == 5.0);
    CHECK(Expr::parse("abs(x1 - x2)").eval(2, 3) == 1.0);
    CHECK(Expr::parse("ln(x1)").eval(1, 0) == 0.0);
    CHECK(Expr::parse("cos(pi*x1)").eval(1, 0) == doctest::Approx(-1.0));
    CHECK(Expr::parse("sin(x1)").eval(1, 0) == doctest::Approx(std::sin(1.0)));
}

TEST_CASE("piecewise builtins match their case definitions")
{
    for (double z : {0.0, 0.5, 1.0}) {
        CHECK(cc::phi(z) == oracle::phi(z));
        CHECK(cc::psi(z) == oracle::psi(z));
        CHECK(cc::capphi(z) == oracle::capphi(z));
    }
    CHECK(cc::phi(0.5) == 0.0);
    CHECK(cc::phi(1.0) == 1.0);
    CHECK(cc::psi(1.0) == 1.0);
    CHECK(cc::capphi(0.5) == 1.0);
    CHECK(cc::capphi(1.0) == 0.0);
    // Negative arguments clamp to zero.
    CHECK(cc::phi(-1e-12) == 0.0);
    CHECK(cc::psi(-1e-12) == 0.0);
    CHECK(cc::capphi(-1e-12) == 1.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-0.5, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double z = d(rng);
        CHECK(cc::phi(z) == doctest::Approx(oracle::phi(z)).epsilon(1e-15));
        CHECK(cc::psi(z) == doctest::Approx(oracle::psi(z)).epsilon(1e-15));
        CHECK(cc::capphi(z) == doctest::Approx(oracle::capphi(z)).epsilon(1e-15));
    }
}

TEST_CASE("interval evaluation")
{
    CHECK(cc::phi(Interval(0, 0.5)) == Interval(0, 0));
    CHECK(cc::psi(Interval(0.5, 2)) == Interval(0.5, 1));
    CHECK(cc::capphi(Interval(1, 2)) == Interval(0, 0));
    CHECK(cc::capphi(Interval(0.25, 0.75)) == Interval(0.5, 1));

    const Expr e = Expr::parse("0.5+5*phi(x1)*psi(x2)");
    const Interval r = e.eval(Interval(0, 5), Interval(0, 5));
    CHECK(r.contains(Interval(0.5, 5.5)));
    CHECK(r.lo >= 0.5 - 1e-12);
    CHECK(r.hi <= 5.5 + 1e-12);

    CHECK_THROWS_AS((void)Expr::parse("x1^x2").eval(Interval(1, 2), Interval(1, 2)), cc::EvalError);
    CHECK_THROWS_AS((void)Expr::parse("x1^0.5").eval(Interval(1, 2), Interval(1, 2)), cc::EvalError);
    CHECK(Expr::parse("x1^2").eval(Interval(-1, 2), Interval(0)) == Interval(0, 4));
}

TEST_CASE("evaluation errors carry the node offset")
{
    const std::string src = "1 + 1/(x1-1)";
    try {
        (void)Expr::parse(src).eval(1.0, 0.0);
        FAIL("expected EvalError");
    } catch (const cc::EvalError& e) {
        CHECK(e.offset() == 5);
    }
    try {
        (void)Expr::parse("2*ln(x1)").eval(0.0, 0.0);
        FAIL("expected EvalError");
    } catch (const cc::EvalError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS((void)Expr::parse("1/x1").eval(Interval(-1, 1), Interval(0)), cc::EvalError);
    CHECK_THROWS_AS((void)Expr::parse("ln(x1)").eval(Interval(0, 1), Interval(0)), cc::EvalError);
}

TEST_CASE("parse errors")
{
    struct Bad {
        const char* src;
        std::size_t offset;
    };
    for (const Bad& b : {Bad{"", 0}, Bad{"1 +", 3}, Bad{"x3", 0}, Bad{"foo(x1)", 0}, Bad{"phi(x1, x2)", 0},
                         Bad{"min(x1)", 0}, Bad{"(x1", 3}, Bad{"x1 x2", 3}, Bad{"1 ** 2", 3}}) {
        CAPTURE(b.src);
        try {
            (void)Expr::parse(b.src);
            FAIL("expected ParseError");
        } catch (const cc::ParseError& e) {
            CHECK(e.offset() <= std::string(b.src).size());
            CHECK(e.offset() == b.offset);
        }
    }
}

TEST_CASE("unparse round-trips")
{
    for (const char* src : {"0.5 + 5*phi(x1)*psi(x2)", "exp(x2^2/32) + 0.1*cos(pi*x1)", "-x1^2",
                            "4.5 + 5*phi(x1)*psi(x2) - 4*capphi(x1)", "min(x1, -x2)/(1+abs(x1))",
                            "0.1 + 1e-300*x1", "2^3^2", "-(-x1)", "ln(1 + x1) - sin(x2)"}) {
        CAPTURE(src);
        const Expr e = Expr::parse(src);
        const Expr back = Expr::parse(e.unparse());
        CHECK(e.same_tree(back));
        CHECK(back.unparse() == e.unparse());
    }
}

TEST_CASE("variable usage")
{
    const Expr e = Expr::parse("exp(x2^2/32) + 0.1*cos(pi)");
    CHECK_FALSE(e.uses_variable(0));
    CHECK(e.uses_variable(1));
    CHECK(Expr().eval(3, 4) == 0.0);
}

TEST_CASE("parser totality on random input")
{
    const std::string alphabet = "x12 +-*/^().,epsihncoambl0123456789e";
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> len(0, 24);
    std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1);
    int parsed = 0;
    int rejected = 0;
    for (int i = 0; i < 20000; ++i) {
        std::string s;
        const std::size_t n = len(rng);
        for (std::size_t k = 0; k < n; ++k) {
            s += alphabet[ch(rng)];
        }
        try {
            const Expr e = Expr::parse(s);
            CHECK(Expr::parse(e.unparse()).same_tree(e));
            ++parsed;
        } catch (const cc::ParseError& e) {
            CHECK(e.offset() <= s.size());
            ++rejected;
        }
    }
    CHECK(parsed > 0);
    CHECK(rejected > 0);

    // Deep nesting is rejected, not a stack overflow.
    CHECK_THROWS_AS(Expr::parse(std::string(100000, '(') + "x1" + std::string(100000, ')')), cc::ParseError);
    CHECK_THROWS_AS(Expr::parse(std::string(100000, '-') + "x1"), cc::ParseError);
}

TEST_CASE("point values lie in interval values")
{
    const char* exprs[] = {"0.5 + 5*phi(x1)*psi(x2)",
                           "exp(x2^2/32) + 0.1*cos(pi*x1)",
                           "4.5 + 5*phi(x1)*psi(x2) - 4*capphi(x1)",
                           "0.36787944117144233 * (214.00987565756307 - x2) * exp(-8 / (1 + x1))",
                           "min(x1, x2)*max(x1, 1 - x2) / (2 + sin(x1*x2))",
                           "abs(x1 - x2)^3 - ln(1 + x2)*capphi(x2)"};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    for (const char* src : exprs) {
        const Expr e = Expr::parse(src);
        for (int i = 0; i < 1000; ++i) {
            double a = d(rng), b = d(rng), c = d(rng), w = d(rng);
            const Interval x1(std::min(a, b), std::max(a, b));
            const Interval x2(std::min(c, w), std::max(c, w));
            const Interval r = e.eval(x1, x2);
            const double p1 = std::uniform_real_distribution<double>(x1.lo, x1.hi)(rng);
            const double p2 = std::uniform_real_distribution<double>(x2.lo, x2.hi)(rng);
            CAPTURE(src);
            CHECK(r.contains(e.eval(p1, p2)));
            CHECK(r.contains(e.eval(x1.lo, x2.hi)));
        }
    }
}
