#include "conecert/conespace.hpp"
#include "conecert/interval.hpp"

#include "doctest.h"

#include <memory>
#include <random>

using conecert::GridFunction;
using conecert::Level;
using conecert::QuadratureRule;
using conecert::RegionLabel;
using conecert::RegionSpec;
namespace cc = conecert;

namespace {

std::shared_ptr<const QuadratureRule> rule(std::size_t n = 129)
{
    return std::make_shared<const QuadratureRule>(QuadratureRule::make(n, cc::Scheme::trapezoid));
}

GridFunction constant(double v, std::size_t n = 129)
{
    return GridFunction::sample(rule(n), [v](double) { return v; });
}

RegionSpec nine_spec()
{
    RegionSpec s;
    for (auto& c : s.comp) {
        c = {0.5, 1.0, 2.0, 5.0, 0.5};
    }
    return s;
}

} // namespace

TEST_CASE("sup norm")
{
    CHECK(cc::sup_norm(GridFunction::sample(rule(), [](double t) { return t - t * t / 2; })) == 0.5);
    CHECK(cc::sup_norm(constant(0.0)) == 0.0);
    CHECK(cc::sup_norm(GridFunction::sample(rule(), [](double t) { return t; })) == 1.0);
    CHECK(cc::sup_norm(constant(-2.0)) == 2.0);
    CHECK_THROWS_AS(GridFunction(rule(5), std::vector<double>(4, 0.0)), std::invalid_argument);
}

TEST_CASE("windowed minimum")
{
    CHECK(cc::min_window(GridFunction::sample(rule(), [](double t) { return t; }), 0.5) == 0.5);
    CHECK(cc::min_window(constant(3.0), 0.0) == 3.0);
    CHECK(cc::min_window(GridFunction::sample(rule(), [](double t) { return t - t * t / 2; }), 0.5) == 0.375);
    CHECK_THROWS_AS(cc::min_window(GridFunction::sample(rule(4), [](double t) { return t; }), 0.5), cc::DomainError);
}

TEST_CASE("cone membership")
{
    CHECK(cc::in_cone_p(GridFunction::sample(rule(), [](double t) { return t; })));
    CHECK_FALSE(cc::in_cone_p(GridFunction::sample(rule(), [](double t) { return 1 - t; })));
    CHECK(cc::in_cone_p(constant(0.0)));
    CHECK_FALSE(cc::in_cone_p(GridFunction::sample(rule(), [](double t) { return t - 0.1; })));
}

TEST_CASE("nontrivial")
{
    CHECK_FALSE(cc::nontrivial(constant(0.0), 1e-6));
    CHECK(cc::nontrivial(GridFunction::sample(rule(), [](double t) { return t; }), 1e-6));
    CHECK_FALSE(cc::nontrivial(constant(1e-9), 1e-6));
}

TEST_CASE("classification examples")
{
    const RegionSpec s = nine_spec();
    const auto mode = cc::ClassifyMode::nine;
    CHECK(cc::classify(constant(0.3), constant(0.3), s, mode).region_name() == "U4");
    CHECK(cc::classify(constant(2.0), constant(2.0), s, mode).region_name() == "U1");
    const RegionLabel l = cc::classify(constant(0.7), constant(2.0), s, mode);
    CHECK(l.region_name() == "U6");
    CHECK(l.first == Level::M);
    CHECK(l.second == Level::B);
    CHECK(l.tag() == "M,B");

    // Ties at the thresholds fall into M.
    CHECK(cc::classify_component(constant(0.5), s.comp[0]) == Level::M);
    CHECK(cc::classify_component(constant(1.0), s.comp[0]) == Level::M);
    CHECK_THROWS_AS(cc::classify(constant(5.5), constant(1.0), s, mode), cc::OutsideAmbient);
}

TEST_CASE("region name table")
{
    const std::pair<std::pair<Level, Level>, const char*> table[] = {
        {{Level::B, Level::B}, "U1"}, {{Level::B, Level::S}, "U2"}, {{Level::S, Level::B}, "U3"},
        {{Level::S, Level::S}, "U4"}, {{Level::B, Level::M}, "U5"}, {{Level::M, Level::B}, "U6"},
        {{Level::S, Level::M}, "U7"}, {{Level::M, Level::S}, "U8"}, {{Level::M, Level::M}, "U9"}};
    for (const auto& [levels, name] : table) {
        const RegionLabel l{levels.first, levels.second};
        CHECK(l.region_name() == name);
        CHECK(RegionLabel::from_region_name(name, false) == l);
    }
    CHECK(RegionLabel{Level::B, std::nullopt}.region_name() == "U1");
    CHECK(RegionLabel{Level::S, std::nullopt}.region_name() == "U2");
    CHECK(RegionLabel{Level::M, std::nullopt}.region_name() == "U3");
    CHECK(RegionLabel{Level::M, std::nullopt}.tag() == "M,Annulus");
    CHECK(RegionLabel::from_region_name("U3", true) == RegionLabel{Level::M, std::nullopt});
    CHECK_THROWS_AS(RegionLabel::from_region_name("U4", true), cc::ConfigError);
    CHECK_THROWS_AS(RegionLabel::from_region_name("U10", false), cc::ConfigError);
}

TEST_CASE("hybrid classification uses the annulus")
{
    RegionSpec s = nine_spec();
    s.annulus = cc::Annulus{2.0, 5.0};
    const auto l = cc::classify(constant(2.0), constant(3.0), s, cc::ClassifyMode::hybrid);
    CHECK(l.region_name() == "U1");
    CHECK_FALSE(l.second.has_value());
    CHECK_THROWS_AS(cc::classify(constant(2.0), constant(1.0), s, cc::ClassifyMode::hybrid), cc::OutsideAmbient);
    CHECK_THROWS_AS(cc::classify(constant(2.0), constant(6.0), s, cc::ClassifyMode::hybrid), cc::OutsideAmbient);
}

TEST_CASE("region spec validation")
{
    RegionSpec s = nine_spec();
    CHECK_NOTHROW(s.validate());
    s.comp[0].d = 1.0;
    CHECK_THROWS_AS(s.validate(), cc::ConfigError);
    s = nine_spec();
    s.comp[1].b = 6.0;
    CHECK_THROWS_AS(s.validate(), cc::ConfigError);
    s = nine_spec();
    s.annulus = cc::Annulus{5.0, 2.0};
    CHECK_THROWS_AS(s.validate(), cc::ConfigError);
}

TEST_CASE("S and B are exclusive and the minimum never exceeds the sup")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    const RegionSpec s = nine_spec();
    const auto r = rule(65);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<double> v(r->size());
        const double scale = d(rng);
        for (auto& x : v) {
            x = scale * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        }
        const GridFunction u(r, v);
        CHECK(cc::min_window(u, 0.5) <= cc::sup_norm(u));
        CHECK(cc::min_window(u, 0.0) <= cc::min_window(u, 0.5));
        const bool small = cc::sup_norm(u) < s.comp[0].d;
        const bool big = cc::min_window(u, 0.5) > s.comp[0].a;
        CHECK_FALSE((small && big));
    }
}

TEST_CASE("classification is stable under refinement for nodal piecewise-linear functions")
{
    const RegionSpec s = nine_spec();
    // Breakpoints at multiples of 1/8 are nodes of every rule below.
    const auto pl = [](double lo, double hi) {
        return [lo, hi](double t) { return t < 0.5 ? lo + (hi - lo) * 2 * t : hi; };
    };
    for (auto [lo, hi] : {std::pair{0.0, 0.4}, {0.2, 0.8}, {0.0, 3.0}, {1.5, 2.5}, {0.6, 0.9}}) {
        std::optional<RegionLabel> first;
        for (std::size_t n : {17u, 33u, 129u, 257u}) {
            const auto r = rule(n);
            const auto l = cc::classify(GridFunction::sample(r, pl(lo, hi)), GridFunction::sample(r, pl(hi / 2, hi)),
                                        s, cc::ClassifyMode::nine);
            if (first) {
                CHECK(l == *first);
            }
            first = l;
        }
    }
}
