#include "conecert/kernels.hpp"

#include "conecert/interval.hpp"

#include <algorithm>
#include <cmath>

namespace conecert {

namespace {

void check_unit(double x, const char* what)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + " = " + std::to_string(x) + " lies outside [0,1]");
    }
}

} // namespace

KernelKind KernelKind::dirichlet_neumann() { return {Tag::dirichlet_neumann, 0.0}; }

KernelKind KernelKind::reaction_convection_diffusion(double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("reaction-convection-diffusion kernel needs beta > 0, got "
                          + std::to_string(beta));
    }
    return {Tag::reaction_convection_diffusion, beta};
}

std::string KernelKind::name() const
{
    return tag_ == Tag::dirichlet_neumann ? "dirichlet_neumann" : "rcd";
}

double green(const KernelKind& k, double t, double s)
{
    check_unit(t, "t");
    check_unit(s, "s");
    if (k.tag() == KernelKind::Tag::dirichlet_neumann) {
        return std::min(t, s);
    }
    return t <= s ? std::exp((t - s) / k.beta()) : 1.0;
}

double kernel_row_integral(const KernelKind& k, double t)
{
    check_unit(t, "t");
    if (k.tag() == KernelKind::Tag::dirichlet_neumann) {
        return t - 0.5 * t * t;
    }
    // int_0^t 1 ds + int_t^1 exp((t-s)/beta) ds
    return t + k.beta() * (-std::expm1((t - 1.0) / k.beta()));
}

QuadratureRule QuadratureRule::make(std::size_t n, Scheme scheme)
{
    if (n < 3) {
        throw DomainError("quadrature rule needs at least 3 nodes, got " + std::to_string(n));
    }
    if (scheme == Scheme::simpson && n % 2 == 0) {
        throw DomainError("Simpson rule needs an odd node count, got " + std::to_string(n));
    }
    const std::size_t m = n - 1;
    const double h = 1.0 / static_cast<double>(m);
    std::vector<double> nodes(n);
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = static_cast<double>(i) / static_cast<double>(m);
    }
    nodes.back() = 1.0;
    if (scheme == Scheme::trapezoid) {
        std::fill(weights.begin(), weights.end(), h);
        weights.front() = weights.back() = 0.5 * h;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = (i == 0 || i == m) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
        }
    }
    return {std::move(nodes), std::move(weights), scheme};
}

std::optional<std::size_t> QuadratureRule::index_of(double t) const
{
    if (!(t >= -1e-12 && t <= 1.0 + 1e-12)) {
        return std::nullopt;
    }
    const auto m = static_cast<double>(nodes_.size() - 1);
    const double pos = t * m;
    const double r = std::round(pos);
    if (std::fabs(pos - r) > 1e-12 * m) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(r);
}

} // namespace conecert
