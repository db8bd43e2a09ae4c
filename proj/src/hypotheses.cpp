#include "conecert/hypotheses.hpp"

#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace conecert {

std::string relation_symbol(Relation r)
{
    switch (r) {
    case Relation::lt:
        return "<";
    case Relation::le:
        return "<=";
    case Relation::gt:
        return ">";
    case Relation::ge:
        return ">=";
    }
    return "?";
}

bool holds(Relation r, double value, double bound)
{
    switch (r) {
    case Relation::lt:
        return value < bound;
    case Relation::le:
        return value <= bound;
    case Relation::gt:
        return value > bound;
    case Relation::ge:
        return value >= bound;
    }
    return false;
}

std::string status_name(CertStatus s)
{
    switch (s) {
    case CertStatus::pass:
        return "Pass";
    case CertStatus::fail:
        return "Fail";
    case CertStatus::unknown:
        return "Unknown";
    }
    return "?";
}

std::string overall_name(Overall o)
{
    switch (o) {
    case Overall::all_pass:
        return "AllPass";
    case Overall::some_fail:
        return "SomeFail";
    case Overall::inconclusive:
        return "Inconclusive";
    }
    return "?";
}

namespace {

// Strict relations need the enclosure strictly on the right side of the
// bound; touching it is not a certificate.
bool certified(Relation r, const Interval& range, double bound)
{
    switch (r) {
    case Relation::lt:
        return range.hi < bound;
    case Relation::le:
        return range.hi <= bound;
    case Relation::gt:
        return range.lo > bound;
    case Relation::ge:
        return range.lo >= bound;
    }
    return false;
}

double lattice_coord(const Interval& iv, std::size_t i, std::size_t n)
{
    if (i + 1 == n) {
        return iv.hi;
    }
    return iv.lo + iv.width() * (static_cast<double>(i) / static_cast<double>(n - 1));
}

std::string box_str(const Box& b) { return b.x1.str() + " x " + b.x2.str(); }

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

CertVerdict certify_box(const BoxIneq& q, const CertBudget& budget)
{
    CertVerdict v;
    v.condition_id = q.condition_id;

    struct Item {
        Box box;
        int depth;
    };
    std::deque<Item> work;
    work.push_back({q.box, 0});
    bool undecided = false;

    while (!work.empty()) {
        if (v.boxes_explored >= budget.max_boxes) {
            undecided = true;
            break;
        }
        const Item it = work.front();
        work.pop_front();
        ++v.boxes_explored;

        Interval range;
        try {
            range = q.expr.eval(it.box.x1, it.box.x2);
        } catch (const EvalError& e) {
            throw EvalError(e.offset(), std::string(e.what()) + " on sub-box " + box_str(it.box));
        }
        if (certified(q.relation, range, q.bound)) {
            continue;
        }

        const double m1 = it.box.x1.mid();
        const double m2 = it.box.x2.mid();
        double value = 0.0;
        try {
            value = q.expr.eval(m1, m2);
        } catch (const EvalError& e) {
            throw EvalError(e.offset(), std::string(e.what()) + " at the midpoint of sub-box "
                                            + box_str(it.box));
        }
        if (!holds(q.relation, value, q.bound)) {
            v.status = CertStatus::fail;
            v.witness = Witness{m1, m2, value};
            break;
        }

        if (it.depth >= budget.max_depth) {
            v.max_depth_reached = true;
            undecided = true;
            continue;
        }
        const bool along_x1 = it.box.x1.width() >= it.box.x2.width();
        const auto halves = split(along_x1 ? it.box.x1 : it.box.x2);
        if (!halves) {
            undecided = true;
            continue;
        }
        if (along_x1) {
            work.push_back({{halves->first, it.box.x2}, it.depth + 1});
            work.push_back({{halves->second, it.box.x2}, it.depth + 1});
        } else {
            work.push_back({{it.box.x1, halves->first}, it.depth + 1});
            work.push_back({{it.box.x1, halves->second}, it.depth + 1});
        }
    }

    if (v.status == CertStatus::fail) {
        if (budget.witness_lattice >= 2) {
            const auto lattice = grid_oracle(q, budget.witness_lattice);
            if (lattice.first_violation) {
                v.witness = lattice.first_violation;
            }
        }
        return v;
    }
    v.status = undecided ? CertStatus::unknown : CertStatus::pass;
    return v;
}

OracleResult grid_oracle(const BoxIneq& q, std::size_t n)
{
    if (n < 2) {
        throw std::invalid_argument("grid oracle needs at least 2 samples per axis");
    }
    OracleResult r;
    bool first = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double x1 = lattice_coord(q.box.x1, i, n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x2 = lattice_coord(q.box.x2, j, n);
            const double f = q.expr.eval(x1, x2);
            if (first || f > r.sup) {
                r.sup = f;
                r.argmax = {x1, x2};
            }
            if (first || f < r.inf) {
                r.inf = f;
                r.argmin = {x1, x2};
            }
            first = false;
            if (!r.first_violation && !holds(q.relation, f, q.bound)) {
                r.first_violation = Witness{x1, x2, f};
            }
        }
    }
    return r;
}

namespace {

struct Constants {
    double d;
    double a;
    double c;
};

Constants comp(const RegionSpec& region, int j)
{
    const auto& t = region.comp[static_cast<std::size_t>(j)];
    return {t.d, t.a, t.c};
}

// beta - beta exp(-1/beta)
double diffusion_factor(double beta) { return -beta * std::expm1(-1.0 / beta); }

} // namespace

void check_theorem_preconditions(const ProblemSpec& spec, const RegionSpec& region, TheoremId theorem)
{
    if (spec.mode != theorem_mode(theorem)) {
        throw ConfigError(theorem_name(theorem) + " applies to mode " + mode_name(theorem_mode(theorem))
                          + ", the problem is in mode " + mode_name(spec.mode));
    }
    auto need = [](bool ok, const std::string& what) {
        if (!ok) {
            throw ConfigError(what);
        }
    };

    switch (theorem) {
    case TheoremId::thm51: {
        need(region.annulus.has_value(), "thm51 needs an annulus (r, R)");
        const auto k = comp(region, 0);
        const auto& an = *region.annulus;
        need(0.0 < k.d && k.d < k.a, "thm51 needs 0 < d < a, got d = " + fmt(k.d) + ", a = " + fmt(k.a));
        need(2.0 * k.a < k.c, "thm51 needs 2a < c, got a = " + fmt(k.a) + ", c = " + fmt(k.c));
        need(0.0 < 2.0 * an.r && 2.0 * an.r < an.R,
             "thm51 needs 0 < 2r < R, got r = " + fmt(an.r) + ", R = " + fmt(an.R));
        break;
    }
    case TheoremId::thm52:
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const std::string id = std::to_string(j + 1);
            need(0.0 < k.d && k.d < k.a, "thm52 needs 0 < d_" + id + " < a_" + id + ", got d = "
                                             + fmt(k.d) + ", a = " + fmt(k.a));
            need(2.0 * k.a <= k.c, "thm52 needs 2a_" + id + " <= c_" + id + ", got a = " + fmt(k.a)
                                       + ", c = " + fmt(k.c));
        }
        break;
    case TheoremId::thm53:
    case TheoremId::thm53_remark52:
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const std::string id = std::to_string(j + 1);
            const double beta = spec.kernel[static_cast<std::size_t>(j)].beta();
            need(0.0 < k.d && k.d < k.a, theorem_name(theorem) + " needs 0 < d_" + id + " < a_" + id
                                             + ", got d = " + fmt(k.d) + ", a = " + fmt(k.a));
            const double lhs = k.a * std::exp(1.0 / beta);
            if (theorem == TheoremId::thm53) {
                need(lhs < k.c, "thm53 needs a_" + id + " exp(1/beta_" + id + ") < c_" + id + ", got "
                                    + fmt(lhs) + " vs c = " + fmt(k.c));
            } else {
                // Equality is allowed; accept the rounding of c = a exp(1/beta).
                need(lhs <= k.c * (1.0 + 1e-12), "thm53_remark52 needs a_" + id + " exp(1/beta_" + id
                                                     + ") <= c_" + id + ", got " + fmt(lhs)
                                                     + " vs c = " + fmt(k.c));
            }
        }
        break;
    }

    ProblemSpec with_region = spec;
    with_region.region = region;
    with_region.validate();
}

std::vector<BoxIneq> expand_conditions(const ProblemSpec& spec, const RegionSpec& region,
                                       TheoremId theorem)
{
    std::vector<BoxIneq> out;
    auto add = [&](std::string id, int j, Interval x1, Interval x2, Relation rel, double bound) {
        out.push_back({std::move(id), spec.f[static_cast<std::size_t>(j)], {x1, x2}, rel, bound});
    };
    // Box with component j restricted to `own` and the other to [0, c_other].
    auto box_for = [&](int j, Interval own) -> std::pair<Interval, Interval> {
        const double c_other = comp(region, 1 - j).c;
        return j == 0 ? std::pair{own, Interval{0.0, c_other}} : std::pair{Interval{0.0, c_other}, own};
    };

    switch (theorem) {
    case TheoremId::thm51: {
        const auto k = comp(region, 0);
        const double r = region.annulus->r;
        const double R = region.annulus->R;
        add("thm51.a", 0, {0.0, k.c}, {0.0, R}, Relation::le, 2.0 * k.c);
        add("thm51.b", 0, {0.0, k.d}, {0.0, R}, Relation::lt, 2.0 * k.d);
        add("thm51.c", 0, {k.a, 2.0 * k.a}, {0.5 * r, R}, Relation::gt, 4.0 * k.a);
        add("thm51.d", 1, {0.0, k.c}, {0.0, r}, Relation::lt, 2.0 * r);
        add("thm51.e", 1, {0.0, k.c}, {0.5 * R, R}, Relation::gt, 8.0 * R / 3.0);
        break;
    }
    case TheoremId::thm52: {
        const Interval ambient1{0.0, comp(region, 0).c};
        const Interval ambient2{0.0, comp(region, 1).c};
        for (int j = 0; j < 2; ++j) {
            add("thm52.a." + std::to_string(j + 1), j, ambient1, ambient2, Relation::le,
                2.0 * comp(region, j).c);
        }
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const auto [x1, x2] = box_for(j, {0.0, k.d});
            add("thm52.b." + std::to_string(j + 1), j, x1, x2, Relation::lt, 2.0 * k.d);
        }
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const auto [x1, x2] = box_for(j, {k.a, 2.0 * k.a});
            add("thm52.c." + std::to_string(j + 1), j, x1, x2, Relation::gt, 4.0 * k.a);
        }
        break;
    }
    case TheoremId::thm53:
    case TheoremId::thm53_remark52: {
        const std::string prefix = theorem_name(theorem) + ".";
        const Interval ambient1{0.0, comp(region, 0).c};
        const Interval ambient2{0.0, comp(region, 1).c};
        // The relaxed ordering needs strictly positive nonlinearities.
        const Relation sign_rel = theorem == TheoremId::thm53 ? Relation::ge : Relation::gt;
        for (int j = 0; j < 2; ++j) {
            add(prefix + "a." + std::to_string(j + 1), j, ambient1, ambient2, sign_rel, 0.0);
        }
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const auto [x1, x2] = box_for(j, {0.0, k.d});
            add(prefix + "b." + std::to_string(j + 1), j, x1, x2, Relation::lt, k.d);
        }
        for (int j = 0; j < 2; ++j) {
            const auto k = comp(region, j);
            const double beta = spec.kernel[static_cast<std::size_t>(j)].beta();
            const auto [x1, x2] = box_for(j, {k.a, k.c});
            add(prefix + "c." + std::to_string(j + 1), j, x1, x2, Relation::gt,
                k.a / diffusion_factor(beta));
        }
        break;
    }
    }
    return out;
}

Promised promised_for(TheoremId theorem)
{
    auto labels = [](std::initializer_list<const char*> names, bool hybrid) {
        std::vector<RegionLabel> out;
        for (const char* n : names) {
            out.push_back(RegionLabel::from_region_name(n, hybrid));
        }
        return out;
    };
    switch (theorem) {
    case TheoremId::thm51:
        return {3, 2, labels({"U1", "U2", "U3"}, true), labels({"U1", "U3"}, true)};
    case TheoremId::thm52:
        return {9, 4, labels({"U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8", "U9"}, false),
                labels({"U1", "U5", "U6", "U9"}, false)};
    case TheoremId::thm53:
    case TheoremId::thm53_remark52:
        return {4, 1, labels({"U4", "U7", "U8", "U9"}, false), labels({"U9"}, false)};
    }
    return {};
}

HypothesisReport check_theorem(const ProblemSpec& spec, const RegionSpec& region, TheoremId theorem,
                               const CertBudget& budget, std::size_t oracle_n)
{
    check_theorem_preconditions(spec, region, theorem);

    HypothesisReport rep;
    rep.theorem = theorem;
    bool any_fail = false;
    bool any_unknown = false;
    for (auto& q : expand_conditions(spec, region, theorem)) {
        ConditionResult cr{q, certify_box(q, budget), std::nullopt, std::nullopt};
        if (oracle_n >= 2) {
            cr.oracle = grid_oracle(q, oracle_n);
            const bool violated = cr.oracle->first_violation.has_value();
            if (cr.verdict.status == CertStatus::pass) {
                cr.oracle_agrees = !violated;
            } else if (cr.verdict.status == CertStatus::fail) {
                cr.oracle_agrees = violated;
            }
        }
        any_fail = any_fail || cr.verdict.status == CertStatus::fail;
        any_unknown = any_unknown || cr.verdict.status == CertStatus::unknown;
        rep.conditions.push_back(std::move(cr));
    }
    rep.overall = any_fail ? Overall::some_fail : (any_unknown ? Overall::inconclusive : Overall::all_pass);
    if (rep.overall == Overall::all_pass) {
        rep.promised = promised_for(theorem);
    }
    return rep;
}

} // namespace conecert
