#pragma once

#include "conecert/hypotheses.hpp"
#include "conecert/problem.hpp"

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

/// Parameter constructions for the reaction-convection-diffusion system
///   beta_j u_j'' - u_j' + p_j (q_j - u_i) exp(-k_j / (1 + u_j)) = 0.
namespace conecert::rcd {

/// m outside its admissible open range. The message names the bound.
class RangeViolation : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Index 0 / 1 refer to components 1 / 2.
struct RcdParams {
    std::array<double, 2> beta{1.0, 1.0};
    std::array<double, 2> k{};
    std::array<double, 2> r{};
    std::array<double, 2> m{};
};

/// Open interval (lower, upper); empty when lower >= upper.
struct OpenRange {
    double lower = 0.0;
    double upper = 0.0;
    [[nodiscard]] bool empty() const { return !(lower < upper); }
    [[nodiscard]] bool contains(double x) const { return lower < x && x < upper; }
};

/// Guard band applied to closed-form inequality margins.
constexpr double kGuardBand = 1e-12;

/// One plain-arithmetic inequality `lhs rel rhs` with rel in {<, >}.
struct InequalityCheck {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::lt;
    CertStatus status = CertStatus::unknown;
};

InequalityCheck make_check(std::string id, double lhs, Relation rel, double rhs);

struct ScalarVerdict {
    CertStatus status = CertStatus::unknown;
    std::vector<InequalityCheck> checks;
};

/// Fail dominates, then Unknown, then Pass.
ScalarVerdict combine(std::vector<InequalityCheck> checks);

struct DerivedParams {
    std::array<double, 2> k{};
    std::array<double, 2> beta{};
    std::array<double, 2> s{};
    std::array<double, 2> s_tilde{};
    double p1 = 0.0;
    double p2 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    OpenRange m1_range;
    OpenRange m2_range;
    /// Direct re-evaluation of the four fixed-ratio inequalities at the
    /// built coefficients.
    std::vector<InequalityCheck> ratio_checks;

    [[nodiscard]] double f1(double x1, double x2) const;
    [[nodiscard]] double f2(double x1, double x2) const;
};

/// (1/z) exp(-k/(1+z)); throws DomainError for z <= 0.
double g_eval(double k, double z);

/// Roots ((k-2) -/+ sqrt(k(k-4)))/2 of z^2 - (k-2) z + 1; throws for k < 4.
std::pair<double, double> s_pair(double k);

/// Sign (-1, 0, +1) of each successive difference of g_k over the grid.
std::vector<int> monotonicity_profile(double k, std::span<const double> grid);

/// Indices i where profile[i-1] != profile[i] among nonzero signs; the
/// corresponding extremum sits at grid[i].
std::vector<std::size_t> sign_changes(std::span<const int> profile);

/// exp(-sqrt(k_j(k_j-4))) < s(k_j)/s~(k_j) * (k_i-1)/k_i for both j.
/// Throws DomainError unless k1, k2 > 4.
ScalarVerdict check_separation(double k1, double k2);

/// Admissible open ranges of m1 and m2. Throws DomainError / ConfigError
/// on k <= 4 or r < k.
std::pair<OpenRange, OpenRange> m_ranges(double k1, double k2, double r1, double r2);

/// Coefficients q_j, p_j from the parameter choice. Throws DomainError,
/// ConfigError, or RangeViolation when m lies outside its range.
DerivedParams build_params(const RcdParams& p);

/// beta_j - beta_j exp(-1/beta_j) > s~(k_j) / f_j(...) for both j. The
/// coefficients in d depend on beta, so d must have been built with the
/// same pair; throws std::invalid_argument otherwise.
ScalarVerdict check_beta_conditions(const DerivedParams& d, double beta1, double beta2);

/// s(z)/s~(z) exp(sqrt(z(z-4))) - 4/3.
double threshold_h(double z);

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
    /// h sampled increasing on the initial search interval.
    bool monotone = false;
};

/// Bisection for the zero of threshold_h on [4, 6] down to width 1e-10.
RootBracket threshold_root();

/// The system as a thm53 problem with d = s, a = s~, c = s~ exp(1/beta).
ProblemSpec make_problem(const RcdParams& p, const DerivedParams& d);

} // namespace conecert::rcd
