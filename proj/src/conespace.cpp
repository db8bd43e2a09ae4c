#include "conecert/conespace.hpp"

#include "conecert/interval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace conecert {

GridFunction::GridFunction(std::shared_ptr<const QuadratureRule> rule, std::vector<double> values)
    : rule_(std::move(rule)), values_(std::move(values))
{
    if (!rule_ || values_.size() != rule_->size()) {
        throw std::invalid_argument("grid function needs one value per quadrature node");
    }
}

double sup_norm(const GridFunction& u)
{
    double m = 0.0;
    for (double v : u.values()) {
        m = std::max(m, std::fabs(v));
    }
    return m;
}

double min_window(const GridFunction& u, double t0)
{
    const auto i0 = u.rule().index_of(t0);
    if (!i0) {
        throw DomainError("window start " + std::to_string(t0) + " is not a grid node");
    }
    const auto v = u.values();
    return *std::min_element(v.begin() + static_cast<std::ptrdiff_t>(*i0), v.end());
}

bool in_cone_p(const GridFunction& u, double tol)
{
    const auto v = u.values();
    if (std::any_of(v.begin(), v.end(), [](double x) { return x < 0.0; })) {
        return false;
    }
    return min_window(u, 0.5) >= 0.5 * sup_norm(u) - tol;
}

bool nontrivial(const GridFunction& u, double eps) { return sup_norm(u) > eps; }

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

void RegionSpec::validate() const
{
    const int ncomp = annulus ? 1 : 2;
    for (int j = 0; j < ncomp; ++j) {
        const auto& t = comp[static_cast<std::size_t>(j)];
        const std::string id = "component " + std::to_string(j + 1);
        if (!(t.d > 0.0)) {
            throw ConfigError(id + ": need 0 < d, got d = " + fmt(t.d));
        }
        if (!(t.d < t.a)) {
            throw ConfigError(id + ": need d < a, got d = " + fmt(t.d) + ", a = " + fmt(t.a));
        }
        if (!(t.a < t.b)) {
            throw ConfigError(id + ": need a < b, got a = " + fmt(t.a) + ", b = " + fmt(t.b));
        }
        if (!(t.b <= t.c)) {
            throw ConfigError(id + ": need b <= c, got b = " + fmt(t.b) + ", c = " + fmt(t.c));
        }
        if (t.window != 0.0 && t.window != 0.5) {
            throw ConfigError(id + ": window start must be 0 or 1/2");
        }
    }
    if (annulus && !(annulus->r > 0.0 && annulus->r < annulus->R)) {
        throw ConfigError("annulus: need 0 < r < R, got r = " + fmt(annulus->r)
                          + ", R = " + fmt(annulus->R));
    }
}

std::string level_name(Level l)
{
    switch (l) {
    case Level::S:
        return "S";
    case Level::M:
        return "M";
    case Level::B:
        return "B";
    }
    return "?";
}

namespace {

// Index k-1 holds the level pair of region U_k.
constexpr std::array<std::pair<Level, Level>, 9> kNineRegions{{
    {Level::B, Level::B},
    {Level::B, Level::S},
    {Level::S, Level::B},
    {Level::S, Level::S},
    {Level::B, Level::M},
    {Level::M, Level::B},
    {Level::S, Level::M},
    {Level::M, Level::S},
    {Level::M, Level::M},
}};

constexpr std::array<Level, 3> kHybridRegions{{Level::B, Level::S, Level::M}};

} // namespace

std::string RegionLabel::region_name() const
{
    if (!second) {
        const auto it = std::find(kHybridRegions.begin(), kHybridRegions.end(), first);
        return "U" + std::to_string(it - kHybridRegions.begin() + 1);
    }
    const auto it = std::find(kNineRegions.begin(), kNineRegions.end(), std::pair{first, *second});
    return "U" + std::to_string(it - kNineRegions.begin() + 1);
}

std::string RegionLabel::tag() const
{
    return level_name(first) + "," + (second ? level_name(*second) : std::string("Annulus"));
}

RegionLabel RegionLabel::from_region_name(const std::string& name, bool hybrid)
{
    const std::size_t limit = hybrid ? 3 : 9;
    if (name.size() != 2 || name[0] != 'U' || name[1] < '1'
        || static_cast<std::size_t>(name[1] - '0') > limit) {
        throw ConfigError("unknown region name '" + name + "'");
    }
    const auto k = static_cast<std::size_t>(name[1] - '1');
    if (hybrid) {
        return {kHybridRegions[k], std::nullopt};
    }
    return {kNineRegions[k].first, kNineRegions[k].second};
}

Level classify_component(const GridFunction& u, const ComponentThresholds& th)
{
    const double sup = sup_norm(u);
    if (sup > th.c) {
        throw OutsideAmbient("sup norm " + fmt(sup) + " exceeds c = " + fmt(th.c));
    }
    if (sup < th.d) {
        return Level::S;
    }
    if (min_window(u, th.window) > th.a) {
        return Level::B;
    }
    return Level::M;
}

RegionLabel classify(const GridFunction& u1, const GridFunction& u2, const RegionSpec& spec,
                     ClassifyMode mode)
{
    const Level first = classify_component(u1, spec.comp[0]);
    if (mode == ClassifyMode::nine) {
        return {first, classify_component(u2, spec.comp[1])};
    }
    if (!spec.annulus) {
        throw ConfigError("hybrid classification needs an annulus");
    }
    const double sup = sup_norm(u2);
    if (sup < spec.annulus->r || sup > spec.annulus->R) {
        throw OutsideAmbient("second component sup norm " + fmt(sup) + " lies outside the annulus ["
                             + fmt(spec.annulus->r) + ", " + fmt(spec.annulus->R) + "]");
    }
    return {first, std::nullopt};
}

} // namespace conecert
