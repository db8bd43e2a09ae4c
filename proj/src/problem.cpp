#include "conecert/problem.hpp"

namespace conecert {

std::string mode_name(Mode m)
{
    switch (m) {
    case Mode::nine:
        return "nine";
    case Mode::hybrid:
        return "hybrid";
    case Mode::thm53:
        return "thm53";
    }
    return "?";
}

Mode parse_mode(const std::string& s)
{
    if (s == "nine") {
        return Mode::nine;
    }
    if (s == "hybrid") {
        return Mode::hybrid;
    }
    if (s == "thm53") {
        return Mode::thm53;
    }
    throw ConfigError("unknown mode '" + s + "' (expected nine, hybrid or thm53)");
}

std::string theorem_name(TheoremId t)
{
    switch (t) {
    case TheoremId::thm51:
        return "thm51";
    case TheoremId::thm52:
        return "thm52";
    case TheoremId::thm53:
        return "thm53";
    case TheoremId::thm53_remark52:
        return "thm53_remark52";
    }
    return "?";
}

TheoremId parse_theorem(const std::string& s)
{
    for (auto t : {TheoremId::thm51, TheoremId::thm52, TheoremId::thm53, TheoremId::thm53_remark52}) {
        if (theorem_name(t) == s) {
            return t;
        }
    }
    throw ConfigError("unknown theorem '" + s + "'");
}

TheoremId default_theorem(Mode m)
{
    switch (m) {
    case Mode::nine:
        return TheoremId::thm52;
    case Mode::hybrid:
        return TheoremId::thm51;
    case Mode::thm53:
        return TheoremId::thm53;
    }
    return TheoremId::thm52;
}

Mode theorem_mode(TheoremId t)
{
    switch (t) {
    case TheoremId::thm51:
        return Mode::hybrid;
    case TheoremId::thm52:
        return Mode::nine;
    case TheoremId::thm53:
    case TheoremId::thm53_remark52:
        return Mode::thm53;
    }
    return Mode::nine;
}

void ProblemSpec::validate() const
{
    const bool want_rcd = mode == Mode::thm53;
    for (int j = 0; j < 2; ++j) {
        if (kernel[static_cast<std::size_t>(j)].is_rcd() != want_rcd) {
            throw ConfigError("mode " + mode_name(mode) + " needs "
                              + (want_rcd ? "rcd" : "dirichlet_neumann") + " kernels, component "
                              + std::to_string(j + 1) + " has "
                              + kernel[static_cast<std::size_t>(j)].name());
        }
    }
    if ((mode == Mode::hybrid) != region.annulus.has_value()) {
        throw ConfigError(mode == Mode::hybrid ? "hybrid mode needs an annulus (r, R)"
                                               : "an annulus is only meaningful in hybrid mode");
    }
    const double want_window = want_rcd ? 0.0 : 0.5;
    const int ncomp = mode == Mode::hybrid ? 1 : 2;
    for (int j = 0; j < ncomp; ++j) {
        if (region.comp[static_cast<std::size_t>(j)].window != want_window) {
            throw ConfigError("window start of component " + std::to_string(j + 1)
                              + " does not match the kernel");
        }
    }
    region.validate();
}

} // namespace conecert
