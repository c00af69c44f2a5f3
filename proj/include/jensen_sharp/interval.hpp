#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace jsharp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Product on the extended reals with the measure-theory convention 0 * inf = 0.
inline double ext_mul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

/// Sum on the extended reals; inf + (-inf) has no meaning here and yields NaN
/// so callers can detect it.
inline double ext_add(double a, double b) { return a + b; }

/// Interval (a, b) with independently open/closed endpoints. Infinite
/// endpoints are always open. A degenerate closed interval [a, a] is allowed
/// for point masses (a constant sample).
class SupportInterval {
public:
    SupportInterval() = default;
    SupportInterval(double lower, double upper, bool lower_closed, bool upper_closed);

    static SupportInterval open(double lower, double upper) { return {lower, upper, false, false}; }
    static SupportInterval closed(double lower, double upper) { return {lower, upper, true, true}; }
    static SupportInterval real_line() { return open(-kInf, kInf); }
    static SupportInterval positive() { return open(0.0, kInf); }

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    bool lower_closed() const { return lower_closed_; }
    bool upper_closed() const { return upper_closed_; }

    bool lower_finite() const { return std::isfinite(lower_); }
    bool upper_finite() const { return std::isfinite(upper_); }
    bool bounded() const { return lower_finite() && upper_finite(); }
    bool degenerate() const { return lower_ == upper_; }
    double width() const { return upper_ - lower_; }

    bool contains(double x) const;
    /// True when every point of `inner` lies in this interval.
    bool includes(const SupportInterval& inner) const;
    /// Intersection; throws DomainError when empty.
    SupportInterval intersect(const SupportInterval& other) const;

    std::string to_string() const;

    friend bool operator==(const SupportInterval&, const SupportInterval&) = default;

private:
    double lower_ = -kInf;
    double upper_ = kInf;
    bool lower_closed_ = false;
    bool upper_closed_ = false;
};

/// Shortest round-trip decimal text for a double; infinities as "inf"/"-inf".
std::string format_real(double x);

}  // namespace jsharp
