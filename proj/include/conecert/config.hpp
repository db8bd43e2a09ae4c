#pragma once

#include "conecert/hypotheses.hpp"
#include "conecert/kernels.hpp"
#include "conecert/problem.hpp"
#include "conecert/rcd.hpp"
#include "conecert/solver.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace conecert {

using Json = nlohmann::ordered_json;

struct CheckerConfig {
    CertBudget budget;
    std::size_t oracle_n = 201;
};

struct SolverConfig {
    std::size_t grid_n = 129;
    Scheme scheme = Scheme::trapezoid;
    SolverParams params;
};

struct OutputConfig {
    std::optional<std::string> report;
    std::optional<std::string> csv_dir;
};

/// A statement the config makes about its own problem, compared against
/// the certified outcome and reported when they disagree.
struct Claim {
    TheoremId theorem = TheoremId::thm52;
    bool hypotheses_hold = true;
};

struct RunConfig {
    std::optional<ProblemSpec> problem;
    std::optional<TheoremId> theorem;
    CheckerConfig checker;
    SolverConfig solver;
    std::optional<rcd::RcdParams> rcd;
    OutputConfig output;
    std::optional<Claim> claim;
    /// The parsed document, echoed verbatim into reports.
    Json source;
};

/// Throws ConfigError on unknown keys, missing or mistyped fields, and
/// non-positive numeric fields; ParseError for bad expressions.
RunConfig parse_config(const Json& doc);
/// Throws ConfigError if the file cannot be read or is not JSON.
RunConfig load_config(const std::string& path);

} // namespace conecert
