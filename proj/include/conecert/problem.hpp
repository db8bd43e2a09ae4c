#pragma once

#include "conecert/conespace.hpp"
#include "conecert/expr.hpp"
#include "conecert/kernels.hpp"

#include <array>
#include <string>

namespace conecert {

/// nine: two Leggett-Williams components (Dirichlet-Neumann kernels);
/// hybrid: Leggett-Williams first component, annulus second component;
/// thm53: reaction-convection-diffusion kernels with window [0,1].
enum class Mode { nine, hybrid, thm53 };

enum class TheoremId { thm51, thm52, thm53, thm53_remark52 };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);
std::string theorem_name(TheoremId t);
TheoremId parse_theorem(const std::string& s);
/// The theorem a mode is checked against by default.
TheoremId default_theorem(Mode m);
Mode theorem_mode(TheoremId t);

struct ProblemSpec {
    std::array<KernelKind, 2> kernel{KernelKind::dirichlet_neumann(), KernelKind::dirichlet_neumann()};
    std::array<Expr, 2> f;
    RegionSpec region;
    Mode mode = Mode::nine;

    /// Throws ConfigError when kernel kinds do not fit the mode or the
    /// region constants are inconsistent.
    void validate() const;
};

} // namespace conecert
