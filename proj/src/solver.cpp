#include "conecert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace conecert {

namespace {

Eigen::VectorXd to_vec(const GridFunction& u)
{
    const auto v = u.values();
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GridFunction to_grid(const std::shared_ptr<const QuadratureRule>& rule, const Eigen::VectorXd& v)
{
    return {rule, std::vector<double>(v.data(), v.data() + v.size())};
}

double sup_abs(const Eigen::VectorXd& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

struct State {
    Eigen::VectorXd u1;
    Eigen::VectorXd u2;
};

double state_residual(const NystromOperator& op, const State& s)
{
    return op.residual(s.u1, s.u2);
}

bool finite_state(const State& s)
{
    return s.u1.allFinite() && s.u2.allFinite();
}

// Newton on F(u) = u - T(u). f_j is evaluated pointwise, so one perturbation
// of a whole component yields every diagonal partial derivative at once.
struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    std::optional<double> rcond;
    std::string failure;
};

NewtonOutcome newton(const NystromOperator& op, State& s, const SolverParams& p)
{
    const Eigen::Index n = s.u1.size();
    NewtonOutcome out;
    double res = state_residual(op, s);
    while (res > p.newton_tol) {
        if (out.iterations >= p.max_newton) {
            out.failure = "newton iteration budget exhausted";
            return out;
        }
        ++out.iterations;

        std::array<Eigen::VectorXd, 2> f{op.nonlinearity(0, s.u1, s.u2), op.nonlinearity(1, s.u1, s.u2)};
        // d[j][v] = partial of f_j with respect to u_v at every node.
        std::array<std::array<Eigen::VectorXd, 2>, 2> d;
        for (int v = 0; v < 2; ++v) {
            const Eigen::VectorXd& base = v == 0 ? s.u1 : s.u2;
            Eigen::VectorXd h = (base.cwiseAbs().array().max(1.0) * p.fd_step).matrix();
            Eigen::VectorXd shifted = base + h;
            h = shifted - base;
            const Eigen::VectorXd& a1 = v == 0 ? shifted : s.u1;
            const Eigen::VectorXd& a2 = v == 0 ? s.u2 : shifted;
            for (int j = 0; j < 2; ++j) {
                d[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)] =
                    ((op.nonlinearity(j, a1, a2) - f[static_cast<std::size_t>(j)]).array() / h.array()).matrix();
            }
        }

        Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(2 * n, 2 * n);
        for (int j = 0; j < 2; ++j) {
            for (int v = 0; v < 2; ++v) {
                jac.block(j * n, v * n, n, n) -=
                    op.matrix(j) * d[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)].asDiagonal();
            }
        }
        Eigen::VectorXd rhs(2 * n);
        rhs << s.u1 - op.matrix(0) * f[0], s.u2 - op.matrix(1) * f[1];

        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        out.rcond = lu.rcond();
        if (!(*out.rcond > 1e-14)) {
            out.failure = "singular Jacobian";
            return out;
        }
        const Eigen::VectorXd step = lu.solve(-rhs);

        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k, lambda *= 0.5) {
            State trial{s.u1 + lambda * step.head(n), s.u2 + lambda * step.tail(n)};
            if (!finite_state(trial)) {
                continue;
            }
            double tres = 0.0;
            try {
                tres = state_residual(op, trial);
            } catch (const EvalError&) {
                continue;
            }
            if (tres < res) {
                s = std::move(trial);
                res = tres;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            out.failure = "line search stalled";
            return out;
        }
    }
    out.converged = true;
    return out;
}

// Damped Picard from s; stops at tol, on growth of the residual (keeping
// the best iterate), or after `steps`.
int picard(const NystromOperator& op, State& s, double damping, int steps, double tol, bool stop_on_growth)
{
    double best = state_residual(op, s);
    State best_state = s;
    int it = 0;
    while (it < steps && best > tol) {
        ++it;
        auto [t1, t2] = op.apply(s.u1, s.u2);
        s.u1 = (1.0 - damping) * s.u1 + damping * t1;
        s.u2 = (1.0 - damping) * s.u2 + damping * t2;
        if (!finite_state(s)) {
            break;
        }
        const double r = state_residual(op, s);
        if (r < best) {
            best = r;
            best_state = s;
        } else if (stop_on_growth) {
            break;
        }
    }
    s = std::move(best_state);
    return it;
}

bool within_ambient(const State& s, const std::array<double, 2>& bound)
{
    return sup_abs(s.u1) <= bound[0] && sup_abs(s.u2) <= bound[1];
}

std::string level_tag(Level l)
{
    return level_name(l);
}

} // namespace

NystromOperator::NystromOperator(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule)
    : spec_(spec), rule_(std::move(rule))
{
    const auto& t = rule_->nodes();
    const auto& w = rule_->weights();
    const auto n = static_cast<Eigen::Index>(t.size());
    for (std::size_t j = 0; j < 2; ++j) {
        k_[j].resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index m = 0; m < n; ++m) {
                const auto ui = static_cast<std::size_t>(i);
                const auto um = static_cast<std::size_t>(m);
                k_[j](i, m) = w[um] * green(spec_.kernel[j], t[ui], t[um]);
            }
        }
    }
}

Eigen::VectorXd NystromOperator::nonlinearity(int j, const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) const
{
    const Expr& f = spec_.f[static_cast<std::size_t>(j)];
    Eigen::VectorXd out(u1.size());
    for (Eigen::Index m = 0; m < u1.size(); ++m) {
        try {
            out(m) = f.eval(u1(m), u2(m));
        } catch (const EvalError& e) {
            throw EvalError(e.offset(), std::string(e.what()) + " (f" + std::to_string(j + 1) + " at node "
                                            + std::to_string(m) + ")");
        }
    }
    return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> NystromOperator::apply(const Eigen::VectorXd& u1,
                                                                   const Eigen::VectorXd& u2) const
{
    return {k_[0] * nonlinearity(0, u1, u2), k_[1] * nonlinearity(1, u1, u2)};
}

double NystromOperator::residual(const Eigen::VectorXd& u1, const Eigen::VectorXd& u2) const
{
    auto [t1, t2] = apply(u1, u2);
    return std::max(sup_abs(u1 - t1), sup_abs(u2 - t2));
}

std::pair<GridFunction, GridFunction> apply_T(const ProblemSpec& spec, const GridFunction& u1,
                                              const GridFunction& u2)
{
    if (u1.rule_ptr() != u2.rule_ptr()) {
        throw std::invalid_argument("apply_T: components live on different quadrature rules");
    }
    const NystromOperator op(spec, u1.rule_ptr());
    auto [t1, t2] = op.apply(to_vec(u1), to_vec(u2));
    return {to_grid(u1.rule_ptr(), t1), to_grid(u1.rule_ptr(), t2)};
}

double residual(const ProblemSpec& spec, const GridFunction& u1, const GridFunction& u2)
{
    if (u1.rule_ptr() != u2.rule_ptr()) {
        throw std::invalid_argument("residual: components live on different quadrature rules");
    }
    const NystromOperator op(spec, u1.rule_ptr());
    return op.residual(to_vec(u1), to_vec(u2));
}

std::string Solution::region_name() const
{
    return region ? region->region_name() : "outside-ambient";
}

std::array<double, 2> Solution::sup_norms() const
{
    return {sup_norm(u1), sup_norm(u2)};
}

std::array<double, 2> ambient_bounds(const ProblemSpec& spec)
{
    const auto& r = spec.region;
    return {r.comp[0].c, spec.mode == Mode::hybrid && r.annulus ? r.annulus->R : r.comp[1].c};
}

SolveResult solve_from(const ProblemSpec& spec, const GridFunction& seed1, const GridFunction& seed2,
                       const SolverParams& params, const std::string& seed_id)
{
    if (seed1.rule_ptr() != seed2.rule_ptr()) {
        throw std::invalid_argument("solve_from: seeds live on different quadrature rules");
    }
    const NystromOperator op(spec, seed1.rule_ptr());
    return solve_from(op, seed1, seed2, params, seed_id);
}

SolveResult solve_from(const NystromOperator& op, const GridFunction& seed1, const GridFunction& seed2,
                       const SolverParams& params, const std::string& seed_id)
{
    const ProblemSpec& spec = op.spec();
    const auto bound = ambient_bounds(spec);
    SolveResult result;
    State s{to_vec(seed1), to_vec(seed2)};
    const bool seed_inside = within_ambient(s, bound);

    int iterations = 0;
    bool converged = false;
    try {
        iterations += picard(op, s, params.damping, params.picard_steps, params.coarse_tol, true);
        State after_picard = s;
        NewtonOutcome nw = newton(op, s, params);
        iterations += nw.iterations;
        result.rcond = nw.rcond;
        converged = nw.converged;
        if (!converged) {
            s = after_picard;
            iterations += picard(op, s, params.damping, params.fallback_picard, params.coarse_tol, false);
            NewtonOutcome again = newton(op, s, params);
            iterations += again.iterations;
            if (again.rcond) {
                result.rcond = again.rcond;
            }
            converged = again.converged;
            if (!converged) {
                result.failure = "no-converge: " + again.failure;
            }
        }
        result.final_residual = state_residual(op, s);
    } catch (const EvalError& e) {
        result.failure = std::string("no-converge: ") + e.what();
        return result;
    }
    if (!converged) {
        return result;
    }
    if (std::min(s.u1.minCoeff(), s.u2.minCoeff()) < -1e-10) {
        result.failure = "negative solution";
        return result;
    }
    const bool inside = within_ambient(s, bound);
    if (!seed_inside && !inside) {
        result.failure = "discarded: seed and limit outside the ambient set";
        return result;
    }

    Solution sol{to_grid(op.rule_ptr(), s.u1), to_grid(op.rule_ptr(), s.u2), result.final_residual,
                 std::nullopt, {}, iterations, seed_id};
    const ClassifyMode mode = spec.mode == Mode::hybrid ? ClassifyMode::hybrid : ClassifyMode::nine;
    try {
        sol.region = classify(sol.u1, sol.u2, spec.region, mode);
    } catch (const OutsideAmbient&) {
        sol.region.reset();
    }
    sol.nontrivial = {nontrivial(sol.u1, params.nontrivial_eps), nontrivial(sol.u2, params.nontrivial_eps)};
    result.solution = std::move(sol);
    return result;
}

std::vector<Seed> default_seeds(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule)
{
    struct Level1 {
        std::string tag;
        double value;
    };
    auto lw_levels = [](const ComponentThresholds& th) {
        return std::vector<Level1>{{level_tag(Level::S), th.d / 2.0},
                                   {level_tag(Level::M), (th.d + th.a) / 2.0},
                                   {level_tag(Level::B), (th.a + th.c) / 2.0}};
    };
    std::array<std::vector<Level1>, 2> levels{lw_levels(spec.region.comp[0]), lw_levels(spec.region.comp[1])};
    if (spec.mode == Mode::hybrid && spec.region.annulus) {
        const auto [r, R] = *spec.region.annulus;
        levels[1] = {{"lo", r + 0.1 * (R - r)}, {"mid", 0.5 * (r + R)}, {"hi", R - 0.1 * (R - r)}};
    }
    auto profile = [&](int j) {
        return [rcd = spec.kernel[static_cast<std::size_t>(j)].is_rcd()](double t) {
            return rcd ? 1.0 : std::min(2.0 * t, 1.0);
        };
    };

    std::vector<Seed> seeds;
    for (const auto& l1 : levels[0]) {
        for (const auto& l2 : levels[1]) {
            auto p1 = profile(0);
            auto p2 = profile(1);
            seeds.push_back({l1.tag + ":" + l2.tag,
                             GridFunction::sample(rule, [&](double t) { return l1.value * p1(t); }),
                             GridFunction::sample(rule, [&](double t) { return l2.value * p2(t); })});
        }
    }
    std::sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.id < b.id; });
    return seeds;
}

bool same_solution(const Solution& a, const Solution& b, const std::array<double, 2>& delta)
{
    auto dist = [](const GridFunction& x, const GridFunction& y) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            m = std::max(m, std::abs(x[i] - y[i]));
        }
        return m;
    };
    return dist(a.u1, b.u1) <= delta[0] && dist(a.u2, b.u2) <= delta[1];
}

MultiStartResult multi_start(const ProblemSpec& spec, std::shared_ptr<const QuadratureRule> rule,
                             const SolverParams& params, const std::vector<std::string>& only)
{
    std::vector<Seed> seeds = default_seeds(spec, rule);
    if (!only.empty()) {
        std::set<std::string> wanted(only.begin(), only.end());
        for (const auto& id : wanted) {
            if (std::none_of(seeds.begin(), seeds.end(), [&](const Seed& s) { return s.id == id; })) {
                throw ConfigError("unknown seed id '" + id + "'");
            }
        }
        std::erase_if(seeds, [&](const Seed& s) { return !wanted.contains(s.id); });
    }

    const NystromOperator op(spec, rule);
    const auto bound = ambient_bounds(spec);
    const std::array<double, 2> delta{params.dedupe * bound[0], params.dedupe * bound[1]};

    MultiStartResult out;
    for (const auto& seed : seeds) {
        SolveResult r = solve_from(op, seed.u1, seed.u2, params, seed.id);
        if (!r.solution) {
            out.seeds.push_back({seed.id, r.failure, r.final_residual});
            continue;
        }
        const bool dup = std::any_of(out.solutions.begin(), out.solutions.end(),
                                     [&](const Solution& s) { return same_solution(s, *r.solution, delta); });
        out.seeds.push_back({seed.id, dup ? "duplicate" : "solution", r.final_residual});
        if (!dup) {
            out.solutions.push_back(std::move(*r.solution));
        }
    }
    return out;
}

} // namespace conecert
