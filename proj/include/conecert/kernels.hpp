#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace conecert {

/// Green's function of one component of the boundary-value system.
///
/// DirichletNeumann: u'' + f = 0, u(0) = u'(1) = 0, G(t,s) = min{t,s}.
/// ReactionConvectionDiffusion(beta): beta u'' - u' + f = 0,
/// beta u'(0) - u(0) = 0, u'(1) = 0, G(t,s) = exp((t-s)/beta) for t <= s
/// and 1 for s <= t.
class KernelKind {
public:
    enum class Tag { dirichlet_neumann, reaction_convection_diffusion };

    static KernelKind dirichlet_neumann();
    /// Throws DomainError unless beta > 0 and finite.
    static KernelKind reaction_convection_diffusion(double beta);

    [[nodiscard]] Tag tag() const { return tag_; }
    /// Diffusion coefficient; 0 for the Dirichlet-Neumann kernel.
    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] bool is_rcd() const { return tag_ == Tag::reaction_convection_diffusion; }
    [[nodiscard]] std::string name() const;

    friend bool operator==(const KernelKind&, const KernelKind&) = default;

private:
    KernelKind(Tag tag, double beta) : tag_(tag), beta_(beta) {}
    Tag tag_;
    double beta_;
};

/// Throws DomainError for t or s outside [0,1].
double green(const KernelKind& k, double t, double s);

/// Closed form of the row integral of the kernel over s in [0,1]:
/// t - t^2/2 (Dirichlet-Neumann), t + beta(1 - exp((t-1)/beta)) (RCD).
double kernel_row_integral(const KernelKind& k, double t);

enum class Scheme { trapezoid, simpson };

/// Composite rule on the uniform grid 0, h, ..., 1.
class QuadratureRule {
public:
    /// Throws DomainError for n < 3 or an even n with Simpson.
    static QuadratureRule make(std::size_t n, Scheme scheme);

    [[nodiscard]] std::size_t size() const { return nodes_.size(); }
    [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
    [[nodiscard]] double step() const { return 1.0 / static_cast<double>(nodes_.size() - 1); }
    [[nodiscard]] Scheme scheme() const { return scheme_; }
    /// Index of the node equal to t (within 1e-12), if any.
    [[nodiscard]] std::optional<std::size_t> index_of(double t) const;

private:
    QuadratureRule(std::vector<double> nodes, std::vector<double> weights, Scheme scheme)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), scheme_(scheme)
    {
    }
    std::vector<double> nodes_;
    std::vector<double> weights_;
    Scheme scheme_;
};

} // namespace conecert
