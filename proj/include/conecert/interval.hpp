#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace conecert {

/// Raised when an argument lies outside the domain of an operation
/// (division by an interval containing zero, log of a non-positive value,
/// kernel arguments outside [0,1], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Directed rounding by stepping to the neighbouring double.
namespace rounding {
double down(double x);
double up(double x);
} // namespace rounding

/// Closed real interval [lo, hi] with outward-rounded arithmetic.
///
/// Every operation returns an enclosure of the exact real image of its
/// arguments. Elementary operations use error-free transforms (two-sum,
/// fma residuals) to detect inexact results and only then step outward by
/// one ulp, so exactly representable results stay tight: [1,2]*[3,4] is
/// exactly [3,8].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr explicit Interval(double v) : lo(v), hi(v) {}
    /// Throws DomainError if lo > hi or either bound is NaN.
    Interval(double lo_, double hi_);

    [[nodiscard]] double width() const { return hi - lo; }
    [[nodiscard]] double mid() const;
    [[nodiscard]] bool is_point() const { return lo == hi; }
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
    [[nodiscard]] bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    [[nodiscard]] bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    [[nodiscard]] std::string str() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval operator-(Interval a);
Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
/// Throws DomainError when b contains zero.
Interval operator/(Interval a, Interval b);

inline Interval operator+(Interval a, double b) { return a + Interval(b); }
inline Interval operator+(double a, Interval b) { return Interval(a) + b; }
inline Interval operator-(Interval a, double b) { return a - Interval(b); }
inline Interval operator-(double a, Interval b) { return Interval(a) - b; }
inline Interval operator*(Interval a, double b) { return a * Interval(b); }
inline Interval operator*(double a, Interval b) { return Interval(a) * b; }
inline Interval operator/(Interval a, double b) { return a / Interval(b); }
inline Interval operator/(double a, Interval b) { return Interval(a) / b; }

enum class ArithOp { add, sub, mul, div };

Interval iv_arith(Interval a, Interval b, ArithOp op);

Interval hull(Interval a, Interval b);
/// Empty intersection yields std::nullopt.
std::optional<Interval> intersect(Interval a, Interval b);

Interval exp(Interval a);
/// Exact range over the monotone pieces of cos (extrema at integer
/// multiples of pi), endpoints rounded outward.
Interval cos(Interval a);
Interval sin(Interval a);
/// Throws DomainError unless a.lo > 0.
Interval log(Interval a);
Interval abs(Interval a);
Interval min(Interval a, Interval b);
Interval max(Interval a, Interval b);
Interval pow_nat(Interval a, unsigned n);

/// Enclosure of pi.
Interval pi_interval();

/// Bisects at the midpoint. Point intervals (and intervals too narrow to
/// hold a distinct midpoint) yield std::nullopt.
std::optional<std::pair<Interval, Interval>> split(Interval a);

} // namespace conecert
