#include "conecert/hypotheses.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using conecert::Box;
using conecert::BoxIneq;
using conecert::CertStatus;
using conecert::Expr;
using conecert::Interval;
using conecert::Relation;
namespace cc = conecert;

namespace {

BoxIneq ineq(const char* src, Interval x1, Interval x2, Relation rel, double bound)
{
    return {"test", Expr::parse(src), Box{x1, x2}, rel, bound};
}

cc::ProblemSpec symmetric()
{
    cc::ProblemSpec s;
    s.f[0] = Expr::parse("4.5 + 5*phi(x1)*psi(x2) - 4*capphi(x1)");
    s.f[1] = Expr::parse("4.5 + 5*phi(x2)*psi(x1) - 4*capphi(x2)");
    for (auto& c : s.region.comp) {
        c = {0.5, 1.0, 2.0, 5.0, 0.5};
    }
    return s;
}

cc::ProblemSpec hybrid()
{
    cc::ProblemSpec s;
    s.mode = cc::Mode::hybrid;
    s.f[0] = Expr::parse("0.5 + 5*phi(x1)*psi(x2)");
    s.f[1] = Expr::parse("exp(x2^2/32) + 0.1*cos(pi*x1)");
    s.region.comp[0] = {0.5, 1.0, 2.0, 5.0, 0.5};
    s.region.comp[1] = {0.5, 1.0, 2.0, 5.0, 0.5};
    s.region.annulus = cc::Annulus{2.0, 5.0};
    return s;
}

} // namespace

TEST_CASE("certify_box examples")
{
    auto v = cc::certify_box(ineq("0.5+5*phi(x1)*psi(x2)", {0, 5}, {0, 5}, Relation::le, 10));
    CHECK(v.status == CertStatus::pass);
    CHECK_FALSE(v.witness);

    v = cc::certify_box(ineq("0.5+5*phi(x1)*psi(x2)", {0, 0.5}, {0, 5}, Relation::lt, 1));
    CHECK(v.status == CertStatus::pass);

    v = cc::certify_box(ineq("exp(x2^2/32) + 0.1*cos(pi*x1)", {0, 5}, {2.5, 5}, Relation::gt, 40.0 / 3.0));
    REQUIRE(v.status == CertStatus::fail);
    REQUIRE(v.witness);
    CHECK(v.witness->x1 == 0.0);
    CHECK(v.witness->x2 == 2.5);
    CHECK(v.witness->value == doctest::Approx(std::exp(6.25 / 32) + 0.1));
}

TEST_CASE("strict relations at an attained bound are Unknown, not Pass")
{
    cc::CertBudget small;
    small.max_boxes = 2000;
    small.max_depth = 12;
    const auto v = cc::certify_box(ineq("x1", {0, 1}, {0, 1}, Relation::lt, 1), small);
    CHECK(v.status == CertStatus::unknown);
    CHECK(cc::certify_box(ineq("x1", {0, 1}, {0, 1}, Relation::le, 1)).status == CertStatus::pass);
    CHECK(cc::certify_box(ineq("x1", {0, 1}, {0, 1}, Relation::ge, 0)).status == CertStatus::pass);
}

TEST_CASE("branch and bound resolves dependency overestimation")
{
    // sup of x1 - x1^2 is 1/4, but the enclosure over [0,1] is [-1, 1].
    const auto v = cc::certify_box(ineq("x1 - x1^2", {0, 1}, {0, 1}, Relation::le, 0.26));
    CHECK(v.status == CertStatus::pass);
    CHECK(v.boxes_explored > 1);
}

TEST_CASE("evaluation errors name the sub-box")
{
    try {
        (void)cc::certify_box(ineq("1/(x1 - 0.5)", {0, 1}, {0, 1}, Relation::lt, 10));
        FAIL("expected EvalError");
    } catch (const cc::EvalError& e) {
        CHECK(std::string(e.what()).find("[") != std::string::npos);
    }
}

TEST_CASE("grid oracle examples")
{
    auto o = cc::grid_oracle(ineq("phi(x1)", {0, 1}, {0, 1}, Relation::le, 2), 201);
    CHECK(o.sup == 1.0);
    CHECK(o.argmax[0] == 1.0);
    CHECK(o.inf == 0.0);
    CHECK_FALSE(o.first_violation);

    o = cc::grid_oracle(ineq("0.5", {0, 3}, {1, 2}, Relation::le, 2), 17);
    CHECK(o.sup == 0.5);
    CHECK(o.inf == 0.5);

    o = cc::grid_oracle(ineq("4.5 + 5*phi(x1)*psi(x2) - 4*capphi(x1)", {1, 2}, {0, 5}, Relation::gt, 4), 201);
    CHECK(o.inf == 4.5);

    CHECK_THROWS_AS(cc::grid_oracle(ineq("x1", {0, 1}, {0, 1}, Relation::le, 2), 1), std::invalid_argument);
}

TEST_CASE("symmetric example passes every condition")
{
    const auto s = symmetric();
    const auto rep = cc::check_theorem(s, s.region, cc::TheoremId::thm52);
    CHECK(rep.overall == cc::Overall::all_pass);
    REQUIRE(rep.conditions.size() == 6);
    for (const auto& c : rep.conditions) {
        CHECK(c.verdict.status == CertStatus::pass);
        REQUIRE(c.oracle_agrees);
        CHECK(*c.oracle_agrees);
    }
    REQUIRE(rep.promised);
    CHECK(rep.promised->solutions == 9);
    CHECK(rep.promised->coexistence == 4);
    CHECK(rep.promised->regions.size() == 9);
}

TEST_CASE("hybrid example: (a)-(d) pass, (e) fails with agreeing oracle")
{
    const auto s = hybrid();
    const auto rep = cc::check_theorem(s, s.region, cc::TheoremId::thm51);
    REQUIRE(rep.conditions.size() == 5);
    for (std::size_t i = 0; i < 4; ++i) {
        CAPTURE(rep.conditions[i].verdict.condition_id);
        CHECK(rep.conditions[i].verdict.status == CertStatus::pass);
    }
    const auto& e = rep.conditions[4];
    CHECK(e.verdict.condition_id == "thm51.e");
    CHECK(e.verdict.status == CertStatus::fail);
    REQUIRE(e.oracle_agrees);
    CHECK(*e.oracle_agrees);
    CHECK(e.oracle->sup == doctest::Approx(0.1 + std::exp(25.0 / 32.0)).epsilon(1e-12));
    CHECK(rep.overall == cc::Overall::some_fail);
    CHECK_FALSE(rep.promised);
}

TEST_CASE("template fidelity")
{
    const auto s = hybrid();
    const auto qs = cc::expand_conditions(s, s.region, cc::TheoremId::thm51);
    REQUIRE(qs.size() == 5);
    const double c = 5, d = 0.5, a = 1, r = 2, R = 5;
    struct Want {
        const char* id;
        int f;
        Interval x1, x2;
        Relation rel;
        double bound;
    };
    const Want want[] = {{"thm51.a", 0, {0, c}, {0, R}, Relation::le, 2 * c},
                         {"thm51.b", 0, {0, d}, {0, R}, Relation::lt, 2 * d},
                         {"thm51.c", 0, {a, 2 * a}, {r / 2, R}, Relation::gt, 4 * a},
                         {"thm51.d", 1, {0, c}, {0, r}, Relation::lt, 2 * r},
                         {"thm51.e", 1, {0, c}, {R / 2, R}, Relation::gt, 8 * R / 3}};
    for (std::size_t i = 0; i < 5; ++i) {
        CAPTURE(want[i].id);
        CHECK(qs[i].condition_id == want[i].id);
        CHECK(qs[i].expr.same_tree(s.f[static_cast<std::size_t>(want[i].f)]));
        CHECK(qs[i].box.x1 == want[i].x1);
        CHECK(qs[i].box.x2 == want[i].x2);
        CHECK(qs[i].relation == want[i].rel);
        CHECK(qs[i].bound == want[i].bound);
    }

    auto n = symmetric();
    n.region.comp[1] = {0.25, 0.75, 1.5, 4.0, 0.5};
    const auto q2 = cc::expand_conditions(n, n.region, cc::TheoremId::thm52);
    REQUIRE(q2.size() == 6);
    CHECK(q2[0].bound == 10.0);
    CHECK(q2[1].bound == 8.0);
    CHECK(q2[3].box.x1 == Interval(0, 5));
    CHECK(q2[3].box.x2 == Interval(0, 0.25));
    CHECK(q2[3].bound == 0.5);
    CHECK(q2[5].box.x2 == Interval(0.75, 1.5));
    CHECK(q2[5].bound == 3.0);
    CHECK(q2[5].relation == Relation::gt);
}

TEST_CASE("ordering violations are config errors")
{
    auto s = symmetric();
    s.region.comp[0].d = 1.0;
    CHECK_THROWS_AS(cc::check_theorem(s, s.region, cc::TheoremId::thm52), cc::ConfigError);
    s = symmetric();
    s.region.comp[1].c = 1.5;
    s.region.comp[1].b = 1.5;
    CHECK_THROWS_AS(cc::check_theorem(s, s.region, cc::TheoremId::thm52), cc::ConfigError);
    s = symmetric();
    CHECK_THROWS_AS(cc::check_theorem(s, s.region, cc::TheoremId::thm51), cc::ConfigError);
    auto h = hybrid();
    h.region.annulus = cc::Annulus{3.0, 5.0};
    CHECK_THROWS_AS(cc::check_theorem(h, h.region, cc::TheoremId::thm51), cc::ConfigError);
}

TEST_CASE("soundness pairing on random inequalities")
{
    const char* exprs[] = {"4.5 + 5*phi(x1)*psi(x2) - 4*capphi(x1)", "exp(x2^2/32) + 0.1*cos(pi*x1)",
                           "x1*x2 - sin(3*x1)", "min(x1, 2 - x2) + capphi(x2)"};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    cc::CertBudget budget;
    budget.max_boxes = 4000;
    budget.max_depth = 20;
    int pass = 0, fail = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const char* src = exprs[trial % 4];
        const double a = d(rng), b = d(rng);
        const Interval x1(std::min(a, b), std::max(a, b));
        const Interval x2(0.0, d(rng) + 0.1);
        const Relation rel = trial % 2 == 0 ? Relation::le : Relation::gt;
        const auto q = ineq(src, x1, x2, rel, d(rng) * 3.0 - 1.0);
        const auto v = cc::certify_box(q, budget);
        const auto o = cc::grid_oracle(q, 201);
        if (v.status == CertStatus::pass) {
            ++pass;
            CHECK_FALSE(o.first_violation);
        } else if (v.status == CertStatus::fail) {
            ++fail;
            REQUIRE(v.witness);
            CHECK_FALSE(cc::holds(rel, q.expr.eval(v.witness->x1, v.witness->x2), q.bound));
            CHECK(x1.contains(v.witness->x1));
            CHECK(x2.contains(v.witness->x2));
        }
    }
    CHECK(pass > 0);
    CHECK(fail > 0);
}

TEST_CASE("a larger budget never flips a decided verdict")
{
    const auto q1 = ineq("x1 - x1^2", {0, 1}, {0, 1}, Relation::le, 0.26);
    const auto q2 = ineq("x1 - x1^2 + 0.001*x2", {0, 1}, {0, 1}, Relation::lt, 0.27);
    for (const auto& q : {q1, q2}) {
        std::optional<CertStatus> decided;
        for (std::size_t boxes : {1u, 4u, 16u, 64u, 256u, 4096u, 100000u}) {
            cc::CertBudget b;
            b.max_boxes = boxes;
            const auto v = cc::certify_box(q, b);
            if (decided) {
                CHECK(v.status == *decided);
            } else if (v.status != CertStatus::unknown) {
                decided = v.status;
            }
        }
        CHECK(decided);
    }
}

TEST_CASE("fail witnesses are canonical")
{
    const auto q = ineq("exp(x2^2/32) + 0.1*cos(pi*x1)", {0, 5}, {2.5, 5}, Relation::gt, 40.0 / 3.0);
    const auto a = cc::certify_box(q);
    cc::CertBudget other;
    other.max_depth = 5;
    const auto b = cc::certify_box(q, other);
    REQUIRE(a.witness);
    REQUIRE(b.witness);
    CHECK(a.witness->x1 == b.witness->x1);
    CHECK(a.witness->x2 == b.witness->x2);
}
