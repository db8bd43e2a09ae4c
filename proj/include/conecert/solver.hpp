#pragma once

#include "conecert/conespace.hpp"
#include "conecert/problem.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace conecert {

/// Nyström matrices K_j(i, m) = w_m G_j(t_i, t_m) of the two components.
class NystromOperator {
public:
    NystromOperator(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule);

    [[nodiscard]] const QuadratureRule& rule() const { return *rule_; }
    [[nodiscard]] const std::shared_ptr<const QuadratureRule>& rule_ptr() const { return rule_; }
    [[nodiscard]] const Eigen::MatrixXd& matrix(int j) const { return k_[static_cast<std::size_t>(j)]; }
    [[nodiscard]] const ProblemSpec& spec() const { return spec_; }

    /// f_j at every node. EvalError messages name the node index.
    [[nodiscard]] Eigen::VectorXd nonlinearity(int j, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) const;
    [[nodiscard]] std::pair<Eigen::VectorXd, Eigen::VectorXd> apply(const Eigen::VectorXd& u1,
                                                                    const Eigen::VectorXd& u2) const;
    /// max over nodes and components of |u_j - T_j u|.
    [[nodiscard]] double residual(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) const;

private:
    ProblemSpec spec_;
    std::shared_ptr<const QuadratureRule> rule_;
    std::array<Eigen::MatrixXd, 2> k_;
};

/// Throws std::invalid_argument unless u1 and u2 share one rule.
std::pair<GridFunction, GridFunction> apply_T(const ProblemSpec& spec, const GridFunction& u1,
                                              const GridFunction& u2);
double residual(const ProblemSpec& spec, const GridFunction& u1, const GridFunction& u2);

struct SolverParams {
    int picard_steps = 200;
    double damping = 0.5;
    double newton_tol = 1e-8;
    int max_newton = 50;
    double fd_step = 1e-7;
    /// Picard stops once the residual drops below this.
    double coarse_tol = 1e-3;
    /// Extra damped Picard steps tried when Newton fails.
    int fallback_picard = 5000;
    double nontrivial_eps = 1e-6;
    /// Relative dedupe distance: delta_j = dedupe * c_j.
    double dedupe = 1e-3;
};

struct Solution {
    GridFunction u1;
    GridFunction u2;
    double residual = 0.0;
    /// Empty when the solution lies outside the ambient set.
    std::optional<RegionLabel> region;
    std::array<bool, 2> nontrivial{};
    int iterations = 0;
    std::string seed_id;

    /// "U1".."U9" or "outside-ambient".
    [[nodiscard]] std::string region_name() const;
    [[nodiscard]] std::array<double, 2> sup_norms() const;
};

struct SolveResult {
    std::optional<Solution> solution;
    /// Why no solution was returned; empty on success.
    std::string failure;
    double final_residual = 0.0;
    /// Reciprocal condition estimate of the last Newton Jacobian.
    std::optional<double> rcond;
};

/// Damped Picard to the coarse tolerance, Newton with a finite-difference
/// Jacobian to newton_tol, longer Picard as a fallback. A seed starting
/// outside the ambient set is discarded unless its limit re-enters it.
SolveResult solve_from(const NystromOperator& op, const GridFunction& seed1, const GridFunction& seed2,
                       const SolverParams& params, const std::string& seed_id = "");
SolveResult solve_from(const ProblemSpec& spec, const GridFunction& seed1, const GridFunction& seed2,
                       const SolverParams& params, const std::string& seed_id = "");

struct Seed {
    std::string id;
    GridFunction u1;
    GridFunction u2;
};

/// Level x profile seeds, sorted by id. Levels d/2, (d+a)/2, (a+c)/2 are
/// tagged S, M, B; the hybrid annulus component uses r + (R-r)/10, (r+R)/2
/// and R - (R-r)/10 tagged lo, mid, hi.
std::vector<Seed> default_seeds(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule);

struct SeedOutcome {
    std::string seed_id;
    /// "solution", "duplicate", or the failure reason.
    std::string outcome;
    double residual = 0.0;
};

struct MultiStartResult {
    std::vector<Solution> solutions;
    std::vector<SeedOutcome> seeds;
};

/// Runs every seed (or only the listed ids), then deduplicates in seed-id
/// order. Throws ConfigError for an unknown id in `only`.
MultiStartResult multi_start(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule,
                             const SolverParams& params, const std::vector<std::string>& only = {});

/// True when the two solutions are within delta_j on both components.
bool same_solution(const Solution& a, const Solution& b, const std::array<double, 2>& delta);

/// Upper bounds used for dedupe distances and the ambient test: c_j, or R
/// for the annulus component.
std::array<double, 2> ambient_bounds(const ProblemSpec& spec);

} // namespace conecert
