#include "jensen_sharp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jensen_sharp/errors.hpp"

namespace jsharp {

std::string to_string(HMethod m) {
    switch (m) {
        case HMethod::Direct: return "direct";
        case HMethod::TaylorNearCenter: return "taylor";
        case HMethod::EndpointLimit: return "endpoint_limit";
    }
    return "direct";
}

std::string to_string(BoundMethod m) {
    switch (m) {
        case BoundMethod::Theorem1: return "theorem1";
        case BoundMethod::Corollary1: return "corollary1";
        case BoundMethod::Curvature: return "curvature";
        case BoundMethod::Partition: return "partition";
    }
    return "theorem1";
}

double h_switch_radius(double nu) {
    static const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    return cbrt_eps * std::max(1.0, std::abs(nu));
}

namespace {

// h on the extended reals: phi(x) = +-inf gives h = +-inf instead of an error.
double h_value(const FunctionSpec& f, double nu, double x, HMethod& method) {
    const double d = x - nu;
    if (std::abs(d) <= h_switch_radius(nu)) {
        method = HMethod::TaylorNearCenter;
        double v = 0.5 * f.deriv2(nu);
        if (!std::isfinite(v)) throw EvaluationError("phi''(nu) is not finite at nu = " + format_real(nu));
        return v;
    }
    method = HMethod::Direct;
    if (f.h_kernel) {
        double v = f.h_kernel(x, nu);
        if (std::isnan(v)) throw EvaluationError("h is NaN at x = " + format_real(x));
        return v;
    }
    double fx = f.eval(x);
    if (std::isnan(fx)) throw EvaluationError("phi is NaN at x = " + format_real(x));
    if (std::isinf(fx)) return fx;
    double fnu = f.eval(nu), d1 = f.deriv1(nu);
    if (!std::isfinite(fnu) || !std::isfinite(d1))
        throw EvaluationError("phi or phi' is not finite at nu = " + format_real(nu));
    return (fx - fnu) / (d * d) - d1 / d;
}

double h_value(const FunctionSpec& f, double nu, double x) {
    HMethod ignored;
    return h_value(f, nu, x, ignored);
}

double half_curvature(const FunctionSpec& f, double x) {
    double v = 0.5 * f.deriv2(x);
    if (std::isnan(v)) throw EvaluationError("phi'' is NaN at x = " + format_real(x));
    return v;
}

// Limit at an endpoint for a function that is usually defined there.
double endpoint_value(const std::function<double(double)>& g, double from, double endpoint) {
    if (std::isfinite(endpoint)) {
        try {
            double v = g(endpoint);
            if (!std::isnan(v)) return v;
        } catch (const NumericError&) {
        }
    }
    return detail::approach_limit(g, from, endpoint);
}

constexpr double kDivergence = 1e12;
constexpr int kMaxProbes = 60;

struct GoldenResult {
    double x, value;
};

// Minimizes g on [a, b] by golden-section search.
GoldenResult golden_minimize(const std::function<double(double)>& g, double a, double b) {
    const double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200; ++it) {
        double tol = 1e-10 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
        if (b - a <= tol) break;
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    return gc <= gd ? GoldenResult{c, gc} : GoldenResult{d, gd};
}

// Grid points strictly between `center` and `end`, ordered away from center.
std::vector<double> side_grid(double center, double end, int n) {
    std::vector<double> xs;
    if (center == end) return xs;
    xs.reserve(n);
    if (std::isfinite(end)) {
        for (int i = 1; i < n; ++i) xs.push_back(center + (end - center) * i / n);
    } else {
        const double s = std::max(1.0, std::abs(center));
        const double span = std::log(1e12);
        const double dir = end > 0 ? 1.0 : -1.0;
        for (int i = 1; i < n; ++i) xs.push_back(center + dir * s * std::expm1(span * i / (n - 1)));
    }
    return xs;
}

}  // namespace

namespace detail {

double approach_limit(const std::function<double(double)>& g, double from, double endpoint) {
    std::vector<double> values;
    values.reserve(kMaxProbes);
    const double s = std::max(1.0, std::abs(from));
    double prev_x = from;
    for (int k = 1; k <= kMaxProbes; ++k) {
        double x;
        if (std::isfinite(endpoint))
            x = endpoint + (from - endpoint) * std::ldexp(1.0, -k);
        else
            x = from + (endpoint > 0 ? 1.0 : -1.0) * s * std::ldexp(1.0, k);
        if (x == prev_x || x == endpoint) break;
        prev_x = x;
        double v;
        try {
            v = g(x);
        } catch (const NumericError& e) {
            throw LimitUndeterminedError(std::string("limit toward ") + format_real(endpoint) +
                                         " failed: " + e.what());
        }
        if (std::isinf(v)) return v;
        if (std::abs(v) > kDivergence) return v > 0 ? kInf : -kInf;
        if (!values.empty() && std::abs(v - values.back()) <= 1e-8 * std::max(1.0, std::abs(v))) return v;
        values.push_back(v);
    }
    if (values.size() < 3)
        throw LimitUndeterminedError("too few probes toward " + format_real(endpoint) + " to determine a limit");
    // Not converged: inspect the trend of the tail of the sequence.
    const std::size_t n = values.size();
    const std::size_t start = n > 20 ? n - 20 : 0;
    int sign = 0;
    for (std::size_t i = start + 1; i < n; ++i) {
        double d = values[i] - values[i - 1];
        int sd = (d > 0) - (d < 0);
        if (sd == 0) continue;
        if (sign == 0) sign = sd;
        if (sd != sign)
            throw LimitUndeterminedError("h oscillates toward " + format_real(endpoint) + "; no limit found");
    }
    double d_last = values[n - 1] - values[n - 2];
    double d_prev = values[n - 2] - values[n - 3];
    double ratio = d_prev != 0 ? std::abs(d_last / d_prev) : 0.0;
    if (ratio >= 0.9) return sign > 0 ? kInf : -kInf;
    // Contracting: extrapolate the geometric remainder.
    return values[n - 1] + d_last * ratio / (1.0 - ratio);
}

Extrema find_extrema(const std::function<double(double)>& g, const std::function<double(double)>& limit,
                     const SupportInterval& interval, double center, Trend trend,
                     const std::function<HMethod(double)>& method_at) {
    const double a = interval.lower(), b = interval.upper();
    auto at_endpoint = [&](double e, bool closed) {
        return HEvaluation{limit(e), e, true, closed ? HMethod::Direct : HMethod::EndpointLimit};
    };
    if (interval.degenerate()) {
        HEvaluation only{g(a), a, false, method_at ? method_at(a) : HMethod::Direct};
        return {only, only};
    }
    const HEvaluation left = at_endpoint(a, interval.lower_closed());
    const HEvaluation right = at_endpoint(b, interval.upper_closed());
    // A constant g can come back with inf above sup by rounding.
    auto ordered = [](HEvaluation lo, HEvaluation hi) -> Extrema {
        if (lo.value > hi.value) hi = lo;
        return {lo, hi};
    };
    if (trend == Trend::Increasing) return ordered(left, right);
    if (trend == Trend::Decreasing) return ordered(right, left);

    double c = center;
    if (!(c > a && c < b)) {
        if (interval.bounded())
            c = 0.5 * (a + b);
        else if (std::isfinite(a))
            c = a + std::max(1.0, std::abs(a));
        else if (std::isfinite(b))
            c = b - std::max(1.0, std::abs(b));
        else
            c = 0.0;
    }
    constexpr int kGrid = 512;
    auto lower_side = side_grid(c, a, kGrid / 2);
    auto upper_side = side_grid(c, b, kGrid / 2);
    std::vector<double> xs(lower_side.rbegin(), lower_side.rend());
    xs.push_back(c);
    xs.insert(xs.end(), upper_side.begin(), upper_side.end());
    std::vector<double> vs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) vs[i] = g(xs[i]);

    auto method_of = [&](double x) { return method_at ? method_at(x) : HMethod::Direct; };
    HEvaluation lo{kInf, c, false, HMethod::Direct};
    HEvaluation hi{-kInf, c, false, HMethod::Direct};
    auto offer = [&](double x, double v) {
        if (v < lo.value) lo = {v, x, false, method_of(x)};
        if (v > hi.value) hi = {v, x, false, method_of(x)};
    };
    for (std::size_t i = 0; i < xs.size(); ++i) offer(xs[i], vs[i]);

    const std::size_t n = xs.size();
    auto neg = [&](double x) { return -g(x); };
    std::function<double(double)> gfun = g;
    std::function<double(double)> nfun = neg;
    for (std::size_t i = 0; i < n; ++i) {
        const double prev_v = i > 0 ? vs[i - 1] : left.value;
        const double next_v = i + 1 < n ? vs[i + 1] : right.value;
        if (vs[i] == prev_v && vs[i] == next_v) continue;  // flat
        double left_x = i > 0 ? xs[i - 1] : a;
        double right_x = i + 1 < n ? xs[i + 1] : b;
        if (!std::isfinite(left_x) || !std::isfinite(right_x) || !std::isfinite(vs[i])) continue;
        if (vs[i] <= prev_v && vs[i] <= next_v) {
            auto r = golden_minimize(gfun, left_x, right_x);
            offer(r.x, r.value);
        }
        if (vs[i] >= prev_v && vs[i] >= next_v) {
            auto r = golden_minimize(nfun, left_x, right_x);
            offer(r.x, -r.value);
        }
    }
    // Interior witnesses win ties with endpoint limits.
    if (left.value < lo.value) lo = left;
    if (right.value < lo.value) lo = right;
    if (left.value > hi.value) hi = left;
    if (right.value > hi.value) hi = right;
    return ordered(lo, hi);
}

}  // namespace detail

HEvaluation h_eval(const FunctionSpec& f, double nu, double x) {
    if (std::abs(x - nu) > h_switch_radius(nu)) {
        double fx = f.eval(x);
        if (!std::isfinite(fx)) throw EvaluationError("phi is not finite at x = " + format_real(x));
    }
    HEvaluation out;
    out.at = x;
    out.value = h_value(f, nu, x, out.method);
    if (!std::isfinite(out.value)) throw EvaluationError("h is not finite at x = " + format_real(x));
    return out;
}

double h_endpoint_limit(const FunctionSpec& f, double nu, double endpoint) {
    if (f.h_limit_hint) {
        if (auto v = f.h_limit_hint(endpoint, nu)) return *v;
    }
    return endpoint_value([&](double x) { return h_value(f, nu, x); }, nu, endpoint);
}

namespace {

detail::Trend h_trend(PhiPrimeShape shape) {
    switch (shape) {
        case PhiPrimeShape::Convex: return detail::Trend::Increasing;
        case PhiPrimeShape::Concave: return detail::Trend::Decreasing;
        case PhiPrimeShape::Unknown: return detail::Trend::Unknown;
    }
    return detail::Trend::Unknown;
}

void require_domain(const FunctionSpec& f, const SupportInterval& support) {
    if (!f.natural_domain.includes(support))
        throw DomainError("support " + support.to_string() + " is not inside the domain " +
                          f.natural_domain.to_string() + " of " + f.name);
}

GapBounds assemble(const Extrema& ext, double mean, double var, BoundMethod method) {
    GapBounds out;
    out.lower_detail = ext.inf;
    out.upper_detail = ext.sup;
    out.mean_used = mean;
    out.variance_used = var;
    out.method = method;
    out.lower = ext_mul(ext.inf.value, var);
    out.upper = ext_mul(ext.sup.value, var);
    if (std::isnan(out.lower) || std::isnan(out.upper)) throw NumericError("bound evaluated to NaN");
    return out;
}

GapBounds zero_variance(double mean, BoundMethod method) {
    GapBounds out;
    out.lower_detail = out.upper_detail = HEvaluation{0.0, mean, false, HMethod::Direct};
    out.mean_used = mean;
    out.method = method;
    return out;
}

GapBounds bounds_on_support(const FunctionSpec& f, const Distribution& d, BoundMethod method) {
    require_domain(f, d.support());
    const double mu = d.mean();
    const double var = d.variance();
    if (!std::isfinite(mu) || !std::isfinite(var)) throw DomainError("mean and variance must be finite");
    if (var == 0.0 || d.support().degenerate()) return zero_variance(mu, method);
    return assemble(h_extrema(f, d.support(), mu), mu, var, method);
}

}  // namespace

Extrema h_extrema(const FunctionSpec& f, const SupportInterval& interval, double nu) {
    if (!interval.contains(nu) && !(interval.degenerate() && nu == interval.lower()))
        throw DomainError("nu = " + format_real(nu) + " is outside " + interval.to_string());
    require_domain(f, interval);
    auto g = [&](double x) { return h_value(f, nu, x); };
    auto limit = [&](double e) { return h_endpoint_limit(f, nu, e); };
    auto method_at = [nu](double x) {
        return std::abs(x - nu) <= h_switch_radius(nu) ? HMethod::TaylorNearCenter : HMethod::Direct;
    };
    return detail::find_extrema(g, limit, interval, nu, h_trend(f.phi_prime_shape), method_at);
}

GapBounds jensen_bounds(const FunctionSpec& f, const Distribution& d) {
    return bounds_on_support(f, d, BoundMethod::Theorem1);
}

GapBounds sample_bounds(const FunctionSpec& f, const std::vector<double>& xs) {
    auto d = Distribution::empirical(xs);
    return bounds_on_support(f, d, BoundMethod::Corollary1);
}

Extrema curvature_extrema(const FunctionSpec& f, const SupportInterval& interval, double center) {
    require_domain(f, interval);
    auto g = [&](double x) { return half_curvature(f, x); };
    double from = std::clamp(center, interval.lower(), interval.upper());
    auto limit = [&](double e) {
        // At an infinite end h and phi''/2 share their limit (l'Hopital on phi(x)/x^2).
        if (std::isinf(e) && f.h_limit_hint) {
            if (auto v = f.h_limit_hint(e, from)) return *v;
        }
        return endpoint_value(g, from, e);
    };
    // phi' convex <=> phi'' nondecreasing.
    return detail::find_extrema(g, limit, interval, center, h_trend(f.phi_prime_shape));
}

GapBounds curvature_bounds(const FunctionSpec& f, const Distribution& d) {
    require_domain(f, d.support());
    const double mu = d.mean();
    const double var = d.variance();
    if (var == 0.0 || d.support().degenerate()) return zero_variance(mu, BoundMethod::Curvature);
    return assemble(curvature_extrema(f, d.support(), mu), mu, var, BoundMethod::Curvature);
}

PowerMeanBracket power_mean_bounds(const Distribution& d, double r, double s) {
    if (!(r != 0.0) || !(s != 0.0)) throw ParameterError("power mean needs nonzero r and s");
    PowerMeanBracket out;
    out.p = s / r;
    const Distribution y = transform_power(d, r);
    const FunctionSpec phi = make_catalog_function(catalog::Power{out.p});
    out.gap = jensen_bounds(phi, y);
    const double base = std::pow(y.mean(), out.p);
    out.moment_lower = base + out.gap.lower;
    out.moment_upper = base + out.gap.upper;
    // E[X^s] > 0, so a nonpositive lower end carries no information.
    const double lo = std::max(out.moment_lower, 0.0);
    const double hi = out.moment_upper;
    if (s > 0) {
        out.mean_lower = std::pow(lo, 1.0 / s);
        out.mean_upper = std::pow(hi, 1.0 / s);
    } else {
        out.mean_lower = std::pow(hi, 1.0 / s);
        out.mean_upper = lo > 0 ? std::pow(lo, 1.0 / s) : kInf;
    }
    return out;
}

MeanBracket generalized_mean_bounds(const FunctionSpec& f, const std::function<double(double)>& f_inverse,
                                    const Distribution& d) {
    if (!f_inverse) throw ParameterError("generalized mean needs the inverse of phi");
    MeanBracket out;
    out.gap = jensen_bounds(f, d);
    const double mu = d.mean();
    const double base = f.eval(mu);
    out.expectation_lower = base + out.gap.lower;
    out.expectation_upper = base + out.gap.upper;

    const auto& s = d.support();
    double slope = f.deriv1(mu);
    bool increasing;
    if (slope != 0.0 && std::isfinite(slope)) {
        increasing = slope > 0;
    } else {
        double probe = std::isfinite(s.upper()) ? s.upper() : mu + std::max(1.0, std::abs(mu));
        increasing = f.eval(probe) > base;
    }
    auto invert = [&](double y) {
        // Values past the range of phi map to the support boundary they approach.
        bool toward_upper = increasing ? y > base : y < base;
        double boundary = toward_upper ? s.upper() : s.lower();
        if (!std::isfinite(y)) return boundary;
        double x = f_inverse(y);
        if (std::isnan(x)) return boundary;
        return std::clamp(x, s.lower(), s.upper());
    };
    double m_lo = invert(out.expectation_lower);
    double m_hi = invert(out.expectation_upper);
    if (!increasing) std::swap(m_lo, m_hi);
    out.lower = m_lo;
    out.upper = m_hi;
    return out;
}

}  // namespace jsharp
