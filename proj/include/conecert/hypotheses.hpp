#pragma once

#include "conecert/expr.hpp"
#include "conecert/interval.hpp"
#include "conecert/problem.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace conecert {

enum class Relation { lt, le, gt, ge };

std::string relation_symbol(Relation r);
/// Plain-arithmetic truth of `value rel bound`.
bool holds(Relation r, double value, double bound);

struct Box {
    Interval x1;
    Interval x2;
};

/// "expr(x1, x2) rel bound for every (x1, x2) in box".
struct BoxIneq {
    std::string condition_id;
    Expr expr;
    Box box;
    Relation relation = Relation::le;
    double bound = 0.0;
};

enum class CertStatus { pass, fail, unknown };

std::string status_name(CertStatus s);

struct Witness {
    double x1 = 0.0;
    double x2 = 0.0;
    double value = 0.0;
};

/// Pass is only produced by interval enclosures, Fail only by a concrete
/// point that violates the relation in plain arithmetic.
struct CertVerdict {
    std::string condition_id;
    CertStatus status = CertStatus::unknown;
    std::optional<Witness> witness;
    std::size_t boxes_explored = 0;
    bool max_depth_reached = false;
};

struct CertBudget {
    std::size_t max_boxes = 100000;
    int max_depth = 40;
    /// Lattice used to canonicalise Fail witnesses.
    std::size_t witness_lattice = 201;
};

/// Branch and bound over the box: boxes are processed breadth first, split
/// along the widest axis (x1 on ties). Throws EvalError if the expression
/// cannot be evaluated on some sub-box; the message names the sub-box.
CertVerdict certify_box(const BoxIneq& q, const CertBudget& budget = {});

struct OracleResult {
    double sup = 0.0;
    double inf = 0.0;
    std::array<double, 2> argmax{};
    std::array<double, 2> argmin{};
    /// First lattice point (row-major, x1 outer) violating the relation.
    std::optional<Witness> first_violation;
};

/// Plain-arithmetic extrema over the n×n lattice of the box, corners
/// included. Throws std::invalid_argument for n < 2.
OracleResult grid_oracle(const BoxIneq& q, std::size_t n);

enum class Overall { all_pass, some_fail, inconclusive };

std::string overall_name(Overall o);

struct Promised {
    int solutions = 0;
    int coexistence = 0;
    std::vector<RegionLabel> regions;
    std::vector<RegionLabel> coexistence_regions;
};

struct ConditionResult {
    BoxIneq ineq;
    CertVerdict verdict;
    std::optional<OracleResult> oracle;
    /// Pass agrees when the oracle finds no violating lattice point, Fail
    /// when it finds one. Empty for Unknown verdicts or a skipped oracle.
    std::optional<bool> oracle_agrees;
};

struct HypothesisReport {
    TheoremId theorem = TheoremId::thm52;
    std::vector<ConditionResult> conditions;
    Overall overall = Overall::inconclusive;
    /// Populated only when every condition passes.
    std::optional<Promised> promised;
};

/// Checks the ordering constraints the theorem places on its constants
/// and the kernel kinds. Throws ConfigError naming the violated inequality.
void check_theorem_preconditions(const ProblemSpec& spec, const RegionSpec& region, TheoremId theorem);

/// The theorem's condition templates instantiated with the region
/// constants, in a fixed order.
std::vector<BoxIneq> expand_conditions(const ProblemSpec& spec, const RegionSpec& region,
                                       TheoremId theorem);

/// What an all-pass verdict guarantees for the theorem.
Promised promised_for(TheoremId theorem);

/// oracle_n == 0 skips the grid oracle.
HypothesisReport check_theorem(const ProblemSpec& spec, const RegionSpec& region, TheoremId theorem,
                               const CertBudget& budget = {}, std::size_t oracle_n = 201);

} // namespace conecert
