#include "jensen_sharp/interval.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>

#include "jensen_sharp/errors.hpp"

namespace jsharp {

SupportInterval::SupportInterval(double lower, double upper, bool lower_closed, bool upper_closed)
    : lower_(lower), upper_(upper), lower_closed_(lower_closed), upper_closed_(upper_closed) {
    if (std::isnan(lower) || std::isnan(upper)) throw DomainError("interval endpoint is NaN");
    if (!std::isfinite(lower_)) lower_closed_ = false;
    if (!std::isfinite(upper_)) upper_closed_ = false;
    if (lower_ > upper_) throw DomainError("interval lower endpoint exceeds upper: " + to_string());
    if (lower_ == upper_ && !(lower_closed_ && upper_closed_ && std::isfinite(lower_)))
        throw DomainError("empty interval " + to_string());
}

bool SupportInterval::contains(double x) const {
    if (x < lower_ || x > upper_) return false;
    if (x == lower_ && !lower_closed_) return false;
    if (x == upper_ && !upper_closed_) return false;
    return true;
}

bool SupportInterval::includes(const SupportInterval& inner) const {
    bool lower_ok = inner.lower_ > lower_ || (inner.lower_ == lower_ && (lower_closed_ || !inner.lower_closed_));
    bool upper_ok = inner.upper_ < upper_ || (inner.upper_ == upper_ && (upper_closed_ || !inner.upper_closed_));
    return lower_ok && upper_ok;
}

SupportInterval SupportInterval::intersect(const SupportInterval& other) const {
    double lo = std::max(lower_, other.lower_);
    double hi = std::min(upper_, other.upper_);
    bool lo_closed = (lower_ == other.lower_) ? (lower_closed_ && other.lower_closed_)
                     : (lo == lower_)         ? lower_closed_
                                              : other.lower_closed_;
    bool hi_closed = (upper_ == other.upper_) ? (upper_closed_ && other.upper_closed_)
                     : (hi == upper_)         ? upper_closed_
                                              : other.upper_closed_;
    return {lo, hi, lo_closed, hi_closed};
}

std::string SupportInterval::to_string() const {
    return std::string(lower_closed_ ? "[" : "(") + format_real(lower_) + ", " + format_real(upper_) +
           (upper_closed_ ? "]" : ")");
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) return "nan";
    return std::string(buf, end);
}

}  // namespace jsharp
