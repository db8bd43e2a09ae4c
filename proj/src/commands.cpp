#include "conecert/commands.hpp"

#include "conecert/report.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace conecert {

namespace {

namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

int exit_for(Overall o)
{
    switch (o) {
    case Overall::all_pass:
        return exit_all_pass;
    case Overall::some_fail:
        return exit_some_fail;
    case Overall::inconclusive:
        return exit_inconclusive;
    }
    return exit_inconclusive;
}

int exit_for(CertStatus s)
{
    return s == CertStatus::pass ? exit_all_pass : (s == CertStatus::fail ? exit_some_fail : exit_inconclusive);
}

int worse(int a, int b)
{
    // SomeFail dominates Inconclusive, which dominates AllPass.
    auto rank = [](int c) { return c == exit_some_fail ? 2 : (c == exit_inconclusive ? 1 : 0); };
    return rank(a) >= rank(b) ? a : b;
}

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json echo(const RunConfig& cfg, const CommandOptions& opts, const char* command)
{
    Json e = cfg.source;
    Json o = Json::object();
    o["command"] = command;
    if (opts.oracle_n) {
        o["oracle_n"] = *opts.oracle_n;
    }
    if (opts.grid_n) {
        o["grid_n"] = *opts.grid_n;
    }
    if (!opts.seed_list.empty()) {
        o["seed_list"] = opts.seed_list;
    }
    e["cli"] = std::move(o);
    return e;
}

void set_time(Json& report, const CommandOptions& opts, const char* key, Clock::time_point start)
{
    if (opts.timings) {
        report["timings"][key] = std::chrono::duration<double>(Clock::now() - start).count();
    }
}

/// The problem to work on: the explicit one, or the system derived from
/// the rcd block.
ProblemSpec resolve_problem(const RunConfig& cfg)
{
    if (cfg.problem) {
        return *cfg.problem;
    }
    if (cfg.rcd) {
        const auto d = rcd::build_params(*cfg.rcd);
        return rcd::make_problem(*cfg.rcd, d);
    }
    throw ConfigError("config has neither a problem nor an rcd block");
}

TheoremId resolve_theorem(const RunConfig& cfg, const ProblemSpec& spec)
{
    if (cfg.theorem) {
        return *cfg.theorem;
    }
    return cfg.problem ? default_theorem(spec.mode) : TheoremId::thm53_remark52;
}

void note_claim(const RunConfig& cfg, const HypothesisReport& hr, Json& report)
{
    if (!cfg.claim || cfg.claim->theorem != hr.theorem) {
        return;
    }
    const bool holds = hr.overall == Overall::all_pass;
    report["summary"]["claim_matches"] = cfg.claim->hypotheses_hold == holds;
    if (cfg.claim->hypotheses_hold == holds) {
        return;
    }
    std::string msg = "config claims the hypotheses of " + theorem_name(hr.theorem)
                      + (cfg.claim->hypotheses_hold ? " hold" : " fail") + "; certification returned "
                      + overall_name(hr.overall);
    for (const auto& c : hr.conditions) {
        if (c.verdict.status == CertStatus::fail && c.verdict.witness) {
            const auto& w = *c.verdict.witness;
            msg += "; " + c.verdict.condition_id + " violated at (" + fmt(w.x1) + ", " + fmt(w.x2)
                   + ") with value " + fmt(w.value) + " against bound " + fmt(c.ineq.bound);
        }
    }
    report["notes"].push_back(msg);
}

HypothesisReport certify(const RunConfig& cfg, const CommandOptions& opts, const ProblemSpec& spec,
                         TheoremId theorem)
{
    const std::size_t oracle_n = opts.oracle_n.value_or(cfg.checker.oracle_n);
    return check_theorem(spec, spec.region, theorem, cfg.checker.budget, oracle_n);
}

void fill_verdicts(Json& report, const HypothesisReport& hr)
{
    report["verdicts"] = verdicts_json(hr);
    report["promised"] = promised_json(hr);
    std::size_t disagreements = 0;
    for (const auto& c : hr.conditions) {
        disagreements += c.oracle_agrees && !*c.oracle_agrees ? 1 : 0;
    }
    report["summary"]["theorem"] = theorem_name(hr.theorem);
    report["summary"]["overall"] = overall_name(hr.overall);
    report["summary"]["oracle_disagreements"] = disagreements;
}

template <class Body>
CommandResult guarded(Body&& body)
{
    try {
        return body();
    } catch (const ParseError& e) {
        return {exit_config_error, Json::object(),
                std::string("expression error at offset ") + std::to_string(e.offset()) + ": " + e.what()};
    } catch (const EvalError& e) {
        return {exit_config_error, Json::object(), std::string("evaluation error: ") + e.what()};
    } catch (const ConfigError& e) {
        return {exit_config_error, Json::object(), std::string("config error: ") + e.what()};
    } catch (const DomainError& e) {
        return {exit_config_error, Json::object(), std::string("domain error: ") + e.what()};
    } catch (const std::exception& e) {
        return {exit_config_error, Json::object(), std::string("error: ") + e.what()};
    }
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << text;
}

// Throws on I/O failure.
void emit_report(CommandResult& r, const RunConfig* cfg, const CommandOptions& opts)
{
    if (r.report.empty()) {
        return;
    }
    const std::string text = dump_json(r.report);
    std::optional<fs::path> path;
    if (opts.out_dir) {
        path = fs::path(*opts.out_dir) / "report.json";
    } else if (cfg != nullptr && cfg->output.report) {
        path = fs::path(*cfg->output.report);
    }
    if (path) {
        write_text(*path, text);
    } else {
        std::cout << text;
    }
}

std::string csv_name(std::size_t index, const std::string& seed_id)
{
    std::string id = seed_id;
    for (char& ch : id) {
        if (ch == ':') {
            ch = '_';
        }
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02zu", index + 1);
    return std::string("solution_") + buf + "_" + id + ".csv";
}

template <class Run>
CommandResult load_run_emit(const std::string& path, const CommandOptions& opts, Run&& run)
{
    std::optional<RunConfig> cfg;
    CommandResult r = guarded([&] {
        cfg = load_config(path);
        return run(*cfg);
    });
    if (r.report.empty()) {
        return r;
    }
    try {
        emit_report(r, cfg ? &*cfg : nullptr, opts);
    } catch (const std::exception& e) {
        r.exit_code = exit_config_error;
        r.message = e.what();
    }
    return r;
}

} // namespace

CommandResult run_verify(const RunConfig& cfg, const CommandOptions& opts)
{
    return guarded([&] {
        const auto start = Clock::now();
        const ProblemSpec spec = resolve_problem(cfg);
        const TheoremId theorem = resolve_theorem(cfg, spec);
        const HypothesisReport hr = certify(cfg, opts, spec, theorem);

        CommandResult r;
        r.report = report_skeleton(echo(cfg, opts, "verify"));
        r.report["summary"]["command"] = "verify";
        fill_verdicts(r.report, hr);
        note_claim(cfg, hr, r.report);
        r.exit_code = exit_for(hr.overall);
        r.report["summary"]["exit_code"] = r.exit_code;
        set_time(r.report, opts, "verify_s", start);
        r.message = theorem_name(hr.theorem) + ": " + overall_name(hr.overall);
        return r;
    });
}

CommandResult run_solve(const RunConfig& cfg, const CommandOptions& opts, std::vector<Solution>* found)
{
    return guarded([&] {
        const auto start = Clock::now();
        const ProblemSpec spec = resolve_problem(cfg);
        const std::size_t n = opts.grid_n.value_or(cfg.solver.grid_n);
        auto rule = std::make_shared<const QuadratureRule>(QuadratureRule::make(n, cfg.solver.scheme));
        MultiStartResult ms = multi_start(spec, rule, cfg.solver.params, opts.seed_list);

        CommandResult r;
        r.report = report_skeleton(echo(cfg, opts, "solve"));
        Json sols = Json::array();
        std::set<std::string> regions;
        for (std::size_t i = 0; i < ms.solutions.size(); ++i) {
            Json sj = solution_json(ms.solutions[i]);
            if (opts.out_dir || cfg.output.csv_dir) {
                sj["csv"] = csv_name(i, ms.solutions[i].seed_id);
            }
            sols.push_back(std::move(sj));
            regions.insert(ms.solutions[i].region_name());
        }
        r.report["solutions"] = std::move(sols);

        Json seeds = Json::array();
        for (const auto& s : ms.seeds) {
            seeds.push_back({{"seed_id", s.seed_id}, {"outcome", s.outcome}, {"residual", s.residual}});
        }
        Json& sum = r.report["summary"];
        sum["command"] = "solve";
        sum["mode"] = mode_name(spec.mode);
        sum["grid_n"] = n;
        sum["solutions"] = ms.solutions.size();
        sum["distinct_regions"] = regions.size();
        sum["seeds"] = std::move(seeds);
        r.exit_code = exit_all_pass;
        sum["exit_code"] = r.exit_code;
        if (ms.solutions.empty()) {
            r.report["notes"].push_back("no seed converged to an admissible solution");
        }
        set_time(r.report, opts, "solve_s", start);
        r.message = std::to_string(ms.solutions.size()) + " solution(s), " + std::to_string(regions.size())
                    + " region label(s)";
        if (found != nullptr) {
            *found = std::move(ms.solutions);
        }
        return r;
    });
}

CommandResult run_rcd(const RunConfig& cfg, const CommandOptions& opts)
{
    return guarded([&] {
        const auto start = Clock::now();
        if (!cfg.rcd) {
            throw ConfigError("config has no rcd block");
        }
        const rcd::RcdParams& p = *cfg.rcd;
        CommandResult r;
        r.report = report_skeleton(echo(cfg, opts, "rcd"));
        r.report["summary"]["command"] = "rcd";

        Json j = Json::object();
        j["params"] = {{"k", p.k}, {"r", p.r}, {"m", p.m}, {"beta", p.beta}};
        const auto sep = rcd::check_separation(p.k[0], p.k[1]);
        const auto [s1, st1] = rcd::s_pair(p.k[0]);
        const auto [s2, st2] = rcd::s_pair(p.k[1]);
        j["s"] = Json::array({s1, s2});
        j["s_tilde"] = Json::array({st1, st2});
        j["separation"] = scalar_verdict_json(sep);
        const auto [m1, m2] = rcd::m_ranges(p.k[0], p.k[1], p.r[0], p.r[1]);
        auto range_json = [](const rcd::OpenRange& rg, double m) {
            return Json{{"lower", rg.lower}, {"upper", rg.upper}, {"value", m}, {"contains", rg.contains(m)}};
        };
        j["m_ranges"] = {{"m1", range_json(m1, p.m[0])}, {"m2", range_json(m2, p.m[1])}};

        const auto root = rcd::threshold_root();
        j["threshold_root"] = {{"lo", root.lo}, {"hi", root.hi}, {"width", root.hi - root.lo},
                               {"monotone", root.monotone}};

        int code = exit_for(sep.status);
        try {
            const auto d = rcd::build_params(p);
            j["coefficients"] = {{"p1", d.p1}, {"p2", d.p2}, {"q1", d.q1}, {"q2", d.q2}};
            const auto ratio = rcd::combine(d.ratio_checks);
            j["ratio_checks"] = scalar_verdict_json(ratio);
            const auto beta = rcd::check_beta_conditions(d, p.beta[0], p.beta[1]);
            j["beta_conditions"] = scalar_verdict_json(beta);
            code = worse(code, worse(exit_for(ratio.status), exit_for(beta.status)));

            const ProblemSpec spec = rcd::make_problem(p, d);
            j["system"] = {{"f1", spec.f[0].source()}, {"f2", spec.f[1].source()}};
            const TheoremId theorem = cfg.theorem.value_or(TheoremId::thm53_remark52);
            const HypothesisReport hr = certify(cfg, opts, spec, theorem);
            fill_verdicts(r.report, hr);
            code = worse(code, exit_for(hr.overall));
        } catch (const rcd::RangeViolation& e) {
            j["error"] = e.what();
            r.report["notes"].push_back(std::string("parameter out of range: ") + e.what());
            code = exit_some_fail;
        }
        r.report["rcd"] = std::move(j);
        r.exit_code = code;
        r.report["summary"]["exit_code"] = code;
        set_time(r.report, opts, "rcd_s", start);
        r.message = code == exit_all_pass ? "all rcd checks pass"
                  : code == exit_some_fail ? "some rcd check fails"
                                           : "rcd checks inconclusive";
        return r;
    });
}

CommandResult cmd_verify(const std::string& config_path, const CommandOptions& opts)
{
    return load_run_emit(config_path, opts, [&](const RunConfig& cfg) { return run_verify(cfg, opts); });
}

CommandResult cmd_rcd(const std::string& config_path, const CommandOptions& opts)
{
    return load_run_emit(config_path, opts, [&](const RunConfig& cfg) { return run_rcd(cfg, opts); });
}

CommandResult cmd_solve(const std::string& config_path, const CommandOptions& opts)
{
    return load_run_emit(config_path, opts, [&](const RunConfig& cfg) {
        std::vector<Solution> found;
        CommandResult r = run_solve(cfg, opts, &found);
        std::optional<fs::path> dir;
        if (opts.out_dir) {
            dir = fs::path(*opts.out_dir);
        } else if (cfg.output.csv_dir) {
            dir = fs::path(*cfg.output.csv_dir);
        }
        if (dir && r.exit_code != exit_config_error) {
            for (std::size_t i = 0; i < found.size(); ++i) {
                write_text(*dir / csv_name(i, found[i].seed_id), solution_csv(found[i]));
            }
        }
        return r;
    });
}

} // namespace conecert
