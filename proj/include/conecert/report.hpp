#pragma once

#include "conecert/config.hpp"
#include "conecert/hypotheses.hpp"
#include "conecert/rcd.hpp"
#include "conecert/solver.hpp"

#include <string>
#include <vector>

namespace conecert {

/// Serialises with two-space indentation, keys in insertion order and
/// every float printed with %.17g; non-finite floats become null.
std::string dump_json(const Json& j);

/// Top-level report skeleton with the fixed key order
/// config_echo, verdicts, promised, solutions, rcd, timings, summary, notes.
Json report_skeleton(const Json& config_echo);

Json verdict_json(const ConditionResult& c);
Json verdicts_json(const HypothesisReport& r);
/// null unless the report is AllPass.
Json promised_json(const HypothesisReport& r);
Json solution_json(const Solution& s);
Json check_json(const rcd::InequalityCheck& c);
Json scalar_verdict_json(const rcd::ScalarVerdict& v);

/// Schema violations of a report; empty when it conforms.
std::vector<std::string> validate_report(const Json& report);

/// `t,u1,u2` header, one row per node.
std::string solution_csv(const Solution& s);

} // namespace conecert
