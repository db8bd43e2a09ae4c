#pragma once

#include "conecert/kernels.hpp"

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace conecert {

/// Values of a function at the nodes of a quadrature rule.
class GridFunction {
public:
    /// Throws std::invalid_argument if values.size() != rule->size().
    GridFunction(std::shared_ptr<const QuadratureRule> rule, std::vector<double> values);

    /// Samples f at every node.
    template <class F>
    static GridFunction sample(std::shared_ptr<const QuadratureRule> rule, F&& f)
    {
        std::vector<double> v;
        v.reserve(rule->size());
        for (double t : rule->nodes()) {
            v.push_back(f(t));
        }
        return {std::move(rule), std::move(v)};
    }

    [[nodiscard]] const QuadratureRule& rule() const { return *rule_; }
    [[nodiscard]] const std::shared_ptr<const QuadratureRule>& rule_ptr() const { return rule_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::shared_ptr<const QuadratureRule> rule_;
    std::vector<double> values_;
};

double sup_norm(const GridFunction& u);
/// Minimum over the nodes t >= t0. Throws DomainError if t0 is not a node.
double min_window(const GridFunction& u, double t0);

constexpr double kConeTolerance = 1e-10;

/// Membership in the cone of nonnegative functions that stay above half
/// their sup norm on [1/2, 1].
bool in_cone_p(const GridFunction& u, double tol = kConeTolerance);

bool nontrivial(const GridFunction& u, double eps);

/// Level-set thresholds of one component: d < a < b <= c.
struct ComponentThresholds {
    double d = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// Start of the window of the minimum functional (1/2 or 0).
    double window = 0.5;
};

struct Annulus {
    double r = 0.0;
    double R = 0.0;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RegionSpec {
    std::array<ComponentThresholds, 2> comp{};
    /// In hybrid mode the annulus replaces the thresholds of component 2.
    std::optional<Annulus> annulus;

    /// Throws ConfigError naming the first violated ordering.
    void validate() const;
};

enum class Level { S, M, B };

/// Per-component label; `second` is empty when component 2 is the annulus.
struct RegionLabel {
    Level first = Level::S;
    std::optional<Level> second;

    /// "U1".."U9" for pairs of levels, "U1".."U3" for the hybrid triple.
    [[nodiscard]] std::string region_name() const;
    /// e.g. "B,S" or "M,Annulus".
    [[nodiscard]] std::string tag() const;
    /// Inverse of region_name for the given mode; throws ConfigError.
    static RegionLabel from_region_name(const std::string& name, bool hybrid);

    friend bool operator==(const RegionLabel&, const RegionLabel&) = default;
};

std::string level_name(Level l);

enum class ClassifyMode { nine, hybrid };

class OutsideAmbient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// S if sup < d, B if windowed min > a, M otherwise. Throws OutsideAmbient
/// when a component leaves its ambient set (sup > c, or outside [r, R]).
Level classify_component(const GridFunction& u, const ComponentThresholds& th);
RegionLabel classify(const GridFunction& u1, const GridFunction& u2, const RegionSpec& spec,
                     ClassifyMode mode);

} // namespace conecert
