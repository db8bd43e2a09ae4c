#include "conecert/interval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace conecert {

namespace rounding {

double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

} // namespace rounding

namespace {

using rounding::down;
using rounding::up;

// Below this magnitude fma residuals may be inexact (subnormal range), so
// the rounding direction is not trusted and we always step.
constexpr double kResidualFloor = 0x1p-968;

double down2(double x) { return down(down(x)); }
double up2(double x) { return up(up(x)); }

// Error-free two-sum: a + b == s + err exactly.
double two_sum_err(double a, double b, double s)
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

double add_down(double a, double b)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return two_sum_err(a, b, s) < 0.0 ? down(s) : s;
}

double add_up(double a, double b)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return two_sum_err(a, b, s) > 0.0 ? up(s) : s;
}

double mul_down(double a, double b)
{
    const double p = a * b;
    if (!std::isfinite(p) || a == 0.0 || b == 0.0) {
        return p;
    }
    if (std::fabs(p) < kResidualFloor) {
        return down(p);
    }
    return std::fma(a, b, -p) < 0.0 ? down(p) : p;
}

double mul_up(double a, double b)
{
    const double p = a * b;
    if (!std::isfinite(p) || a == 0.0 || b == 0.0) {
        return p;
    }
    if (std::fabs(p) < kResidualFloor) {
        return up(p);
    }
    return std::fma(a, b, -p) > 0.0 ? up(p) : p;
}

// Sign of (a/b - q) where q is the rounded quotient.
int div_residual_sign(double a, double b, double q)
{
    const double r = std::fma(-q, b, a);
    if (r == 0.0) {
        return 0;
    }
    return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}

double div_down(double a, double b)
{
    const double q = a / b;
    if (!std::isfinite(q) || a == 0.0) {
        return q;
    }
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor) {
        return down(q);
    }
    return div_residual_sign(a, b, q) < 0 ? down(q) : q;
}

double div_up(double a, double b)
{
    const double q = a / b;
    if (!std::isfinite(q) || a == 0.0) {
        return q;
    }
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor) {
        return up(q);
    }
    return div_residual_sign(a, b, q) > 0 ? up(q) : q;
}

double pow_down_nonneg(double x, unsigned n)
{
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) {
        r = mul_down(r, x);
    }
    return r;
}

double pow_up_nonneg(double x, unsigned n)
{
    double r = 1.0;
    for (unsigned i = 0; i < n; ++i) {
        r = mul_up(r, x);
    }
    return r;
}

// Bounds on cos(x) at a single point, widened for libm error.
double cos_down(double x) { return x == 0.0 ? 1.0 : std::max(-1.0, down2(std::cos(x))); }
double cos_up(double x) { return x == 0.0 ? 1.0 : std::min(1.0, up2(std::cos(x))); }

} // namespace

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_)
{
    if (std::isnan(lo_) || std::isnan(hi_) || lo_ > hi_) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "invalid interval bounds [%.17g, %.17g]", lo_, hi_);
        throw DomainError(buf);
    }
}

double Interval::mid() const { return 0.5 * (lo + hi); }

std::string Interval::str() const
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lo, hi);
    return buf;
}

Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

Interval operator+(Interval a, Interval b) { return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)}; }

Interval operator-(Interval a, Interval b) { return {add_down(a.lo, -b.hi), add_up(a.hi, -b.lo)}; }

Interval operator*(Interval a, Interval b)
{
    const double lo = std::min({mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo),
                                mul_down(a.hi, b.hi)});
    const double hi = std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo),
                                mul_up(a.hi, b.hi)});
    return {lo, hi};
}

Interval operator/(Interval a, Interval b)
{
    if (b.contains_zero()) {
        throw DomainError("interval division by " + b.str() + ", which contains zero");
    }
    const double lo = std::min({div_down(a.lo, b.lo), div_down(a.lo, b.hi), div_down(a.hi, b.lo),
                                div_down(a.hi, b.hi)});
    const double hi = std::max({div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo),
                                div_up(a.hi, b.hi)});
    return {lo, hi};
}

Interval iv_arith(Interval a, Interval b, ArithOp op)
{
    switch (op) {
    case ArithOp::add:
        return a + b;
    case ArithOp::sub:
        return a - b;
    case ArithOp::mul:
        return a * b;
    case ArithOp::div:
        return a / b;
    }
    throw DomainError("unknown arithmetic operation");
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

std::optional<Interval> intersect(Interval a, Interval b)
{
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo > hi) {
        return std::nullopt;
    }
    return Interval{lo, hi};
}

Interval exp(Interval a)
{
    const double lo = a.lo == 0.0 ? 1.0 : std::max(0.0, down2(std::exp(a.lo)));
    const double hi = a.hi == 0.0 ? 1.0 : up2(std::exp(a.hi));
    return {lo, hi};
}

Interval cos(Interval a)
{
    const Interval pi = pi_interval();
    if (a.width() >= 2.0 * pi.lo || !std::isfinite(a.width())) {
        return {-1.0, 1.0};
    }
    double lo = std::min(cos_down(a.lo), cos_down(a.hi));
    double hi = std::max(cos_up(a.lo), cos_up(a.hi));
    // Candidate extrema k*pi; the range of k is over-inclusive and each
    // candidate is tested against a rigorous enclosure of k*pi.
    const double kmin = std::floor(a.lo / pi.hi) - 1.0;
    const double kmax = std::ceil(a.hi / pi.lo) + 1.0;
    for (double k = kmin; k <= kmax; k += 1.0) {
        const Interval kpi = Interval(k) * pi;
        if (intersect(kpi, a)) {
            if (std::fmod(std::fabs(k), 2.0) == 0.0) {
                hi = 1.0;
            } else {
                lo = -1.0;
            }
        }
    }
    return {lo, hi};
}

Interval sin(Interval a) { return cos(a - pi_interval() * 0.5); }

Interval log(Interval a)
{
    if (!(a.lo > 0.0)) {
        throw DomainError("log of " + a.str() + ", which is not strictly positive");
    }
    const double lo = a.lo == 1.0 ? 0.0 : down2(std::log(a.lo));
    const double hi = a.hi == 1.0 ? 0.0 : up2(std::log(a.hi));
    return {lo, hi};
}

Interval abs(Interval a)
{
    if (a.lo >= 0.0) {
        return a;
    }
    if (a.hi <= 0.0) {
        return -a;
    }
    return {0.0, std::max(-a.lo, a.hi)};
}

Interval min(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }

Interval max(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval pow_nat(Interval a, unsigned n)
{
    if (n == 0) {
        return Interval(1.0);
    }
    if (n % 2 == 0) {
        const Interval m = abs(a);
        return {pow_down_nonneg(m.lo, n), pow_up_nonneg(m.hi, n)};
    }
    const double lo = a.lo >= 0.0 ? pow_down_nonneg(a.lo, n) : -pow_up_nonneg(-a.lo, n);
    const double hi = a.hi >= 0.0 ? pow_up_nonneg(a.hi, n) : -pow_down_nonneg(-a.hi, n);
    return {lo, hi};
}

Interval pi_interval()
{
    // std::numbers::pi rounds below the true value.
    return {std::numbers::pi, up(std::numbers::pi)};
}

std::optional<std::pair<Interval, Interval>> split(Interval a)
{
    const double m = a.mid();
    if (!(a.lo < m && m < a.hi)) {
        return std::nullopt;
    }
    return std::pair{Interval{a.lo, m}, Interval{m, a.hi}};
}

} // namespace conecert
