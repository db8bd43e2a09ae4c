#include "conecert/rcd.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace conecert::rcd {

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void require_k(double k, const char* name)
{
    if (!(k > 4.0)) {
        throw DomainError(std::string(name) + " must exceed 4, got " + fmt(k));
    }
}

} // namespace

InequalityCheck make_check(std::string id, double lhs, Relation rel, double rhs)
{
    const double margin = rel == Relation::lt || rel == Relation::le ? rhs - lhs : lhs - rhs;
    CertStatus st = CertStatus::unknown;
    if (margin > kGuardBand) {
        st = CertStatus::pass;
    } else if (margin < -kGuardBand) {
        st = CertStatus::fail;
    }
    return {std::move(id), lhs, rhs, rel, st};
}

ScalarVerdict combine(std::vector<InequalityCheck> checks)
{
    ScalarVerdict v;
    v.status = CertStatus::pass;
    for (const auto& c : checks) {
        if (c.status == CertStatus::fail) {
            v.status = CertStatus::fail;
        } else if (c.status == CertStatus::unknown && v.status == CertStatus::pass) {
            v.status = CertStatus::unknown;
        }
    }
    v.checks = std::move(checks);
    return v;
}

double DerivedParams::f1(double x1, double x2) const
{
    return p1 * (q1 - x2) * std::exp(-k[0] / (1.0 + x1));
}

double DerivedParams::f2(double x1, double x2) const
{
    return p2 * (q2 - x1) * std::exp(-k[1] / (1.0 + x2));
}

double g_eval(double k, double z)
{
    if (!(z > 0.0)) {
        throw DomainError("g_k is defined for z > 0, got " + fmt(z));
    }
    return std::exp(-k / (1.0 + z)) / z;
}

std::pair<double, double> s_pair(double k)
{
    if (!(k >= 4.0)) {
        throw DomainError("s(k) needs k >= 4, got " + fmt(k));
    }
    const double root = std::sqrt(k * (k - 4.0));
    const double big = 0.5 * ((k - 2.0) + root);
    // Small root via the product s * s~ = 1, which avoids cancellation.
    return {1.0 / big, big};
}

std::vector<int> monotonicity_profile(double k, std::span<const double> grid)
{
    std::vector<int> out;
    if (grid.size() < 2) {
        return out;
    }
    out.reserve(grid.size() - 1);
    double prev = g_eval(k, grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = g_eval(k, grid[i]);
        out.push_back(cur > prev ? 1 : (cur < prev ? -1 : 0));
        prev = cur;
    }
    return out;
}

std::vector<std::size_t> sign_changes(std::span<const int> profile)
{
    std::vector<std::size_t> out;
    int last = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i] == 0) {
            continue;
        }
        if (last != 0 && profile[i] != last) {
            out.push_back(i);
        }
        last = profile[i];
    }
    return out;
}

ScalarVerdict check_separation(double k1, double k2)
{
    require_k(k1, "k1");
    require_k(k2, "k2");
    std::vector<InequalityCheck> checks;
    const std::array<double, 2> k{k1, k2};
    for (int j = 0; j < 2; ++j) {
        const double kj = k[static_cast<std::size_t>(j)];
        const double ki = k[static_cast<std::size_t>(1 - j)];
        const auto [s, st] = s_pair(kj);
        checks.push_back(make_check("separation_k" + std::to_string(j + 1),
                                    std::exp(-std::sqrt(kj * (kj - 4.0))), Relation::lt,
                                    s / st * (ki - 1.0) / ki));
    }
    return combine(std::move(checks));
}

std::pair<OpenRange, OpenRange> m_ranges(double k1, double k2, double r1, double r2)
{
    require_k(k1, "k1");
    require_k(k2, "k2");
    if (!(r1 >= k1)) {
        throw ConfigError("need r1 >= k1, got r1 = " + fmt(r1) + ", k1 = " + fmt(k1));
    }
    if (!(r2 >= k2)) {
        throw ConfigError("need r2 >= k2, got r2 = " + fmt(r2) + ", k2 = " + fmt(k2));
    }
    const auto [s1, st1] = s_pair(k1);
    const auto [s2, st2] = s_pair(k2);
    const OpenRange m1{st2 / ((r1 - 1.0) * st1) * std::exp(k2 / (1.0 + st2)),
                       s2 / (r1 * st1) * std::exp(k2 / (1.0 + s2))};
    const OpenRange m2{st1 / ((r2 - 1.0) * st2) * std::exp(k1 / (1.0 + st1)),
                       s1 / (r2 * st2) * std::exp(k1 / (1.0 + s1))};
    return {m1, m2};
}

DerivedParams build_params(const RcdParams& p)
{
    for (int j = 0; j < 2; ++j) {
        const auto jj = static_cast<std::size_t>(j);
        if (!(p.beta[jj] > 0.0) || !std::isfinite(p.beta[jj])) {
            throw ConfigError("beta" + std::to_string(j + 1) + " must be positive, got " + fmt(p.beta[jj]));
        }
        if (!(p.m[jj] > 0.0)) {
            throw ConfigError("m" + std::to_string(j + 1) + " must be positive, got " + fmt(p.m[jj]));
        }
    }
    const auto [r1, r2] = m_ranges(p.k[0], p.k[1], p.r[0], p.r[1]);

    DerivedParams d;
    d.k = p.k;
    d.beta = p.beta;
    for (std::size_t j = 0; j < 2; ++j) {
        std::tie(d.s[j], d.s_tilde[j]) = s_pair(p.k[j]);
    }
    d.m1_range = r1;
    d.m2_range = r2;

    const std::array<OpenRange, 2> ranges{r1, r2};
    for (std::size_t j = 0; j < 2; ++j) {
        const std::string name = "m" + std::to_string(j + 1);
        const OpenRange& rg = ranges[j];
        if (rg.empty()) {
            throw RangeViolation(name + " has an empty admissible range (" + fmt(rg.lower) + ", "
                                 + fmt(rg.upper) + ")");
        }
        if (!(p.m[j] > rg.lower)) {
            throw RangeViolation(name + " = " + fmt(p.m[j]) + " is not above the lower bound "
                                 + fmt(rg.lower) + " of its admissible range");
        }
        if (!(p.m[j] < rg.upper)) {
            throw RangeViolation(name + " = " + fmt(p.m[j]) + " is not below the upper bound "
                                 + fmt(rg.upper) + " of its admissible range");
        }
    }

    const double e1 = std::exp(1.0 / p.beta[0]);
    const double e2 = std::exp(1.0 / p.beta[1]);
    d.q1 = p.r[1] * d.s_tilde[1] * e2;
    d.q2 = p.r[0] * d.s_tilde[0] * e1;
    d.p1 = p.m[1] / e2;
    d.p2 = p.m[0] / e1;

    d.ratio_checks = {
        make_check("f1_below_identity_at_s", d.f1(d.s[0], 0.0) / d.s[0], Relation::lt, 1.0),
        make_check("f1_above_identity_at_s_tilde", d.f1(d.s_tilde[0], d.s_tilde[1] * e2) / d.s_tilde[0],
                   Relation::gt, 1.0),
        make_check("f2_below_identity_at_s", d.f2(0.0, d.s[1]) / d.s[1], Relation::lt, 1.0),
        make_check("f2_above_identity_at_s_tilde", d.f2(d.s_tilde[0] * e1, d.s_tilde[1]) / d.s_tilde[1],
                   Relation::gt, 1.0),
    };
    return d;
}

ScalarVerdict check_beta_conditions(const DerivedParams& d, double beta1, double beta2)
{
    if (beta1 != d.beta[0] || beta2 != d.beta[1]) {
        throw std::invalid_argument("coefficients were built for beta = (" + fmt(d.beta[0]) + ", "
                                    + fmt(d.beta[1]) + ")");
    }
    const double e1 = std::exp(1.0 / beta1);
    const double e2 = std::exp(1.0 / beta2);
    const double rhs1 = d.s_tilde[0] / d.f1(d.s_tilde[0], d.s_tilde[1] * e2);
    const double rhs2 = d.s_tilde[1] / d.f2(d.s_tilde[0] * e1, d.s_tilde[1]);
    return combine({
        make_check("beta1_condition", -beta1 * std::expm1(-1.0 / beta1), Relation::gt, rhs1),
        make_check("beta2_condition", -beta2 * std::expm1(-1.0 / beta2), Relation::gt, rhs2),
    });
}

double threshold_h(double z)
{
    const auto [s, st] = s_pair(z);
    return s / st * std::exp(std::sqrt(z * (z - 4.0))) - 4.0 / 3.0;
}

RootBracket threshold_root()
{
    constexpr double kLo = 4.0;
    constexpr double kHi = 6.0;
    RootBracket b{kLo, kHi, true};
    double prev = threshold_h(kLo);
    for (int i = 1; i <= 200; ++i) {
        const double cur = threshold_h(kLo + (kHi - kLo) * i / 200.0);
        b.monotone = b.monotone && cur > prev;
        prev = cur;
    }
    while (b.hi - b.lo > 1e-10) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (threshold_h(mid) < 0.0) {
            b.lo = mid;
        } else {
            b.hi = mid;
        }
    }
    return b;
}

ProblemSpec make_problem(const RcdParams& p, const DerivedParams& d)
{
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    ProblemSpec spec;
    spec.mode = Mode::thm53;
    spec.kernel = {KernelKind::reaction_convection_diffusion(p.beta[0]),
                   KernelKind::reaction_convection_diffusion(p.beta[1])};
    spec.f[0] = Expr::parse(num(d.p1) + " * (" + num(d.q1) + " - x2) * exp(-" + num(d.k[0]) + " / (1 + x1))");
    spec.f[1] = Expr::parse(num(d.p2) + " * (" + num(d.q2) + " - x1) * exp(-" + num(d.k[1]) + " / (1 + x2))");
    for (std::size_t j = 0; j < 2; ++j) {
        auto& t = spec.region.comp[j];
        t.d = d.s[j];
        t.a = d.s_tilde[j];
        t.c = d.s_tilde[j] * std::exp(1.0 / p.beta[j]);
        t.b = std::min(2.0 * t.a, t.c);
        t.window = 0.0;
    }
    return spec;
}

} // namespace conecert::rcd
