#include "conecert/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>

namespace conecert {

namespace {

void allow_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* k : keys) {
            known = known || key == k;
        }
        if (!known) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

const Json& required(const Json& obj, const std::string& where, const char* key)
{
    if (!obj.contains(key)) {
        throw ConfigError(where + ": missing key '" + key + "'");
    }
    return obj.at(key);
}

double number(const Json& v, const std::string& where)
{
    if (!v.is_number()) {
        throw ConfigError(where + ": expected a number");
    }
    return v.get<double>();
}

double positive(const Json& v, const std::string& where)
{
    const double x = number(v, where);
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ConfigError(where + ": must be positive and finite");
    }
    return x;
}

std::size_t count(const Json& v, const std::string& where)
{
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ConfigError(where + ": expected a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
}

std::string text(const Json& v, const std::string& where)
{
    if (!v.is_string()) {
        throw ConfigError(where + ": expected a string");
    }
    return v.get<std::string>();
}

/// A scalar applies to both components; otherwise an array of two.
std::array<double, 2> pair_of(const Json& v, const std::string& where)
{
    if (v.is_array()) {
        if (v.size() != 2) {
            throw ConfigError(where + ": expected two values");
        }
        return {positive(v[0], where + "[0]"), positive(v[1], where + "[1]")};
    }
    const double x = positive(v, where);
    return {x, x};
}

KernelKind parse_kernel(const Json& v, const std::string& where)
{
    allow_keys(v, where, {"kind", "beta"});
    const std::string kind = text(required(v, where, "kind"), where + ".kind");
    if (kind == "dirichlet_neumann") {
        if (v.contains("beta")) {
            throw ConfigError(where + ": beta only applies to rcd kernels");
        }
        return KernelKind::dirichlet_neumann();
    }
    if (kind == "rcd") {
        return KernelKind::reaction_convection_diffusion(positive(required(v, where, "beta"), where + ".beta"));
    }
    throw ConfigError(where + ".kind: unknown kernel '" + kind + "'");
}

ProblemSpec parse_problem(const Json& p, std::optional<TheoremId>& theorem)
{
    allow_keys(p, "problem", {"mode", "theorem", "kernels", "f1", "f2", "region"});
    ProblemSpec spec;
    spec.mode = parse_mode(text(required(p, "problem", "mode"), "problem.mode"));
    if (p.contains("theorem")) {
        theorem = parse_theorem(text(p.at("theorem"), "problem.theorem"));
    }

    if (p.contains("kernels")) {
        const Json& ks = p.at("kernels");
        if (!ks.is_array() || ks.size() != 2) {
            throw ConfigError("problem.kernels: expected two kernels");
        }
        spec.kernel = {parse_kernel(ks[0], "problem.kernels[0]"), parse_kernel(ks[1], "problem.kernels[1]")};
    } else if (spec.mode == Mode::thm53) {
        throw ConfigError("problem: thm53 mode needs explicit rcd kernels");
    }

    spec.f[0] = Expr::parse(text(required(p, "problem", "f1"), "problem.f1"));
    spec.f[1] = Expr::parse(text(required(p, "problem", "f2"), "problem.f2"));

    const Json& r = required(p, "problem", "region");
    allow_keys(r, "problem.region", {"d", "a", "b", "c", "annulus"});
    const auto d = pair_of(required(r, "problem.region", "d"), "problem.region.d");
    const auto a = pair_of(required(r, "problem.region", "a"), "problem.region.a");
    const auto c = pair_of(required(r, "problem.region", "c"), "problem.region.c");
    std::array<double, 2> b{std::min(2.0 * a[0], c[0]), std::min(2.0 * a[1], c[1])};
    if (r.contains("b")) {
        b = pair_of(r.at("b"), "problem.region.b");
    }
    for (std::size_t j = 0; j < 2; ++j) {
        spec.region.comp[j] = {d[j], a[j], b[j], c[j], spec.kernel[j].is_rcd() ? 0.0 : 0.5};
    }
    if (r.contains("annulus")) {
        const Json& an = r.at("annulus");
        allow_keys(an, "problem.region.annulus", {"r", "R"});
        spec.region.annulus = Annulus{positive(required(an, "problem.region.annulus", "r"), "annulus.r"),
                                      positive(required(an, "problem.region.annulus", "R"), "annulus.R")};
    }
    spec.validate();
    return spec;
}

rcd::RcdParams parse_rcd(const Json& v)
{
    allow_keys(v, "rcd", {"k", "r", "m", "beta"});
    rcd::RcdParams p;
    p.k = pair_of(required(v, "rcd", "k"), "rcd.k");
    p.r = pair_of(required(v, "rcd", "r"), "rcd.r");
    p.m = pair_of(required(v, "rcd", "m"), "rcd.m");
    if (v.contains("beta")) {
        p.beta = pair_of(v.at("beta"), "rcd.beta");
    }
    return p;
}

} // namespace

RunConfig parse_config(const Json& doc)
{
    allow_keys(doc, "config", {"problem", "checker", "solver", "rcd", "output", "claim"});
    RunConfig cfg;
    cfg.source = doc;

    if (doc.contains("problem")) {
        cfg.problem = parse_problem(doc.at("problem"), cfg.theorem);
    }
    if (doc.contains("rcd")) {
        cfg.rcd = parse_rcd(doc.at("rcd"));
    }
    if (doc.contains("checker")) {
        const Json& c = doc.at("checker");
        allow_keys(c, "checker", {"budget", "depth", "oracle_n"});
        if (c.contains("budget")) {
            cfg.checker.budget.max_boxes = count(c.at("budget"), "checker.budget");
        }
        if (c.contains("depth")) {
            cfg.checker.budget.max_depth = static_cast<int>(count(c.at("depth"), "checker.depth"));
        }
        if (c.contains("oracle_n")) {
            cfg.checker.oracle_n = count(c.at("oracle_n"), "checker.oracle_n");
        }
    }
    if (doc.contains("solver")) {
        const Json& s = doc.at("solver");
        allow_keys(s, "solver",
                   {"grid_n", "scheme", "picard_steps", "damping", "newton_tol", "max_newton", "fd_step",
                    "dedupe", "nontrivial_eps"});
        auto& sp = cfg.solver.params;
        if (s.contains("grid_n")) {
            cfg.solver.grid_n = count(s.at("grid_n"), "solver.grid_n");
        }
        if (s.contains("scheme")) {
            const std::string sc = text(s.at("scheme"), "solver.scheme");
            if (sc == "trapezoid") {
                cfg.solver.scheme = Scheme::trapezoid;
            } else if (sc == "simpson") {
                cfg.solver.scheme = Scheme::simpson;
            } else {
                throw ConfigError("solver.scheme: unknown scheme '" + sc + "'");
            }
        }
        if (s.contains("picard_steps")) {
            sp.picard_steps = static_cast<int>(count(s.at("picard_steps"), "solver.picard_steps"));
        }
        if (s.contains("damping")) {
            sp.damping = positive(s.at("damping"), "solver.damping");
            if (sp.damping > 1.0) {
                throw ConfigError("solver.damping: must lie in (0, 1]");
            }
        }
        if (s.contains("newton_tol")) {
            sp.newton_tol = positive(s.at("newton_tol"), "solver.newton_tol");
        }
        if (s.contains("max_newton")) {
            sp.max_newton = static_cast<int>(count(s.at("max_newton"), "solver.max_newton"));
        }
        if (s.contains("fd_step")) {
            sp.fd_step = positive(s.at("fd_step"), "solver.fd_step");
        }
        if (s.contains("dedupe")) {
            sp.dedupe = positive(s.at("dedupe"), "solver.dedupe");
        }
        if (s.contains("nontrivial_eps")) {
            sp.nontrivial_eps = positive(s.at("nontrivial_eps"), "solver.nontrivial_eps");
        }
    }
    if (doc.contains("output")) {
        const Json& o = doc.at("output");
        allow_keys(o, "output", {"report", "csv_dir"});
        if (o.contains("report")) {
            cfg.output.report = text(o.at("report"), "output.report");
        }
        if (o.contains("csv_dir")) {
            cfg.output.csv_dir = text(o.at("csv_dir"), "output.csv_dir");
        }
    }
    if (doc.contains("claim")) {
        const Json& c = doc.at("claim");
        allow_keys(c, "claim", {"theorem", "hypotheses_hold"});
        Claim cl;
        cl.theorem = parse_theorem(text(required(c, "claim", "theorem"), "claim.theorem"));
        if (c.contains("hypotheses_hold")) {
            if (!c.at("hypotheses_hold").is_boolean()) {
                throw ConfigError("claim.hypotheses_hold: expected a boolean");
            }
            cl.hypotheses_hold = c.at("hypotheses_hold").get<bool>();
        }
        cfg.claim = cl;
    }
    if (cfg.problem && cfg.theorem && theorem_mode(*cfg.theorem) != cfg.problem->mode) {
        throw ConfigError("problem.theorem " + theorem_name(*cfg.theorem) + " does not fit mode "
                          + mode_name(cfg.problem->mode));
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config '" + path + "'");
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

} // namespace conecert
