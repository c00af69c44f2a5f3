#include "jensen_sharp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/interval.hpp"

namespace jsharp::quad {

namespace {

// Abscissae and weights of the 7/15 Gauss-Kronrod pair (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Piece {
    double a, b, value, error;
    int depth;
    bool operator<(const Piece& o) const { return error < o.error; }
};

double tolerance(const Options& o, double value) { return std::max(o.abs_tol, o.rel_tol * std::abs(value)); }

}  // namespace

Result gauss_kronrod15(const std::function<double(double)>& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = g(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = half * kXgk[j];
        double f1 = g(center - dx);
        double f2 = g(center + dx);
        kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
    }
    Result r;
    r.value = kronrod * half;
    r.error = std::abs((kronrod - gauss) * half);
    r.evaluations = 15;
    if (std::isnan(r.value)) throw QuadratureError("integrand is NaN on [" + format_real(a) + ", " + format_real(b) + "]");
    if (std::isinf(r.value)) {
        r.diverged = true;
        r.error = kInf;
    }
    return r;
}

Result integrate_finite(const std::function<double(double)>& g, double a, double b, const Options& opts) {
    Result total;
    if (a == b) return total;
    Result first = gauss_kronrod15(g, a, b);
    total.evaluations = first.evaluations;
    if (first.diverged) return first;

    std::priority_queue<Piece> heap;
    heap.push({a, b, first.value, first.error, 0});
    // Pieces that reached the depth cap keep their estimate but are not split.
    double frozen_value = 0.0, frozen_error = 0.0;
    double value = first.value, error = first.error;
    int pieces = 1;

    while (error > tolerance(opts, value) && !heap.empty()) {
        if (pieces >= opts.max_subdivisions)
            throw QuadratureError("adaptive quadrature exhausted its budget of " + std::to_string(opts.max_subdivisions) +
                                  " subintervals (error estimate " + format_real(error) + ")");
        Piece p = heap.top();
        heap.pop();
        double mid = 0.5 * (p.a + p.b);
        if (p.depth >= opts.max_depth || !(p.a < mid && mid < p.b)) {
            frozen_value += p.value;
            frozen_error += p.error;
            continue;
        }
        Result left = gauss_kronrod15(g, p.a, mid);
        Result right = gauss_kronrod15(g, mid, p.b);
        total.evaluations += 30;
        if (left.diverged || right.diverged) {
            Result r;
            r.diverged = true;
            r.value = (left.diverged ? left.value : right.value);
            r.error = kInf;
            r.evaluations = total.evaluations;
            return r;
        }
        heap.push({p.a, mid, left.value, left.error, p.depth + 1});
        heap.push({mid, p.b, right.value, right.error, p.depth + 1});
        ++pieces;
        // Re-sum to avoid drift from incremental updates.
        value = frozen_value;
        error = frozen_error;
        auto copy = heap;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
    }
    if (error > tolerance(opts, value))
        throw QuadratureError("adaptive quadrature stalled at depth cap (error estimate " + format_real(error) + ")");
    total.value = value;
    total.error = error;
    return total;
}

namespace {

// Sums geometric blocks [edges(k), edges(k+1)] until their contribution
// contracts below the target or the block budget runs out.
Result integrate_blocks(const std::function<double(double)>& g, const std::function<std::pair<double, double>(int)>& block,
                        const Options& opts, double running_scale) {
    Result total;
    double prev = 0.0;
    double ratio = 1.0;
    int zero_run = 0;
    Options piece_opts = opts;
    piece_opts.abs_tol = opts.abs_tol / 16;
    for (int k = 0; k < opts.max_blocks; ++k) {
        auto [lo, hi] = block(k);
        if (!(lo < hi)) break;  // block collapsed to a point in floating point
        Result r = integrate_finite(g, lo, hi, piece_opts);
        total.evaluations += r.evaluations;
        if (r.diverged) {
            total.diverged = true;
            total.value = r.value;
            total.error = kInf;
            return total;
        }
        total.value += r.value;
        total.error += r.error;
        double mag = std::abs(r.value);
        if (mag == 0.0) {
            if (++zero_run >= 2) return total;
        } else {
            zero_run = 0;
        }
        if (k >= 2 && std::abs(prev) > 0.0) {
            ratio = mag / std::abs(prev);
            if (ratio < 0.9) {
                double remainder = mag * ratio / (1.0 - ratio);
                double target = std::max(opts.abs_tol, opts.rel_tol * std::max(running_scale, std::abs(total.value)));
                if (remainder < target / 16) {
                    total.error += remainder;
                    return total;
                }
            }
        }
        prev = r.value;
    }
    if (ratio >= 0.99) {
        total.diverged = true;
        total.value = total.value >= 0 ? kInf : -kInf;
        total.error = kInf;
        return total;
    }
    // Contracting, but slowly: add the geometric remainder and report it as error.
    double remainder = std::abs(prev) * ratio / (1.0 - ratio);
    total.value += std::copysign(remainder, prev);
    total.error += remainder;
    return total;
}

bool singular_at(const std::function<double(double)>& g, double x) {
    try {
        return !std::isfinite(g(x));
    } catch (const NumericError&) {
        return true;
    }
}

}  // namespace

Result integrate(const std::function<double(double)>& g, double a, double b, double center, double scale,
                 const Options& opts) {
    if (!(a <= b)) throw QuadratureError("integration limits out of order");
    if (a == b) return {};
    if (!(scale > 0) || !std::isfinite(scale)) scale = 1.0;
    if (!std::isfinite(center)) center = std::isfinite(a) ? a : (std::isfinite(b) ? b : 0.0);

    const double reach = 8 * scale;
    double lo = std::isfinite(a) ? a : std::min(center - reach, b - reach);
    double hi = std::isfinite(b) ? b : std::max(center + reach, a + reach);
    lo = std::max(lo, a);
    hi = std::min(hi, b);

    bool left_singular = std::isfinite(a) && singular_at(g, a);
    bool right_singular = std::isfinite(b) && singular_at(g, b);
    const double core_width = hi - lo;
    const double left_reserve = left_singular ? core_width / 4 : 0.0;
    const double right_reserve = right_singular ? core_width / 4 : 0.0;
    double core_lo = lo + left_reserve;
    double core_hi = hi - right_reserve;

    Result total = integrate_finite(g, core_lo, core_hi, opts);
    if (total.diverged) return total;
    const double core_mag = std::abs(total.value);

    auto accumulate = [&](const Result& r) {
        total.evaluations += r.evaluations;
        if (r.diverged) {
            if (total.diverged && (total.value > 0) != (r.value > 0))
                throw QuadratureError("integral has divergent parts of opposite sign");
            total.diverged = true;
            total.value = r.value;
            total.error = kInf;
            return;
        }
        if (!total.diverged) {
            total.value += r.value;
            total.error += r.error;
        }
    };

    if (!std::isfinite(a)) {
        accumulate(integrate_blocks(
            g,
            [=](int k) {
                return std::pair{lo - reach * (std::ldexp(1.0, k + 1) - 1), lo - reach * (std::ldexp(1.0, k) - 1)};
            },
            opts, core_mag));
    } else if (left_singular) {
        accumulate(integrate_blocks(
            g, [=](int k) { return std::pair{a + std::ldexp(left_reserve, -k - 1), a + std::ldexp(left_reserve, -k)}; },
            opts, core_mag));
    }
    if (!std::isfinite(b)) {
        accumulate(integrate_blocks(
            g,
            [=](int k) {
                return std::pair{hi + reach * (std::ldexp(1.0, k) - 1), hi + reach * (std::ldexp(1.0, k + 1) - 1)};
            },
            opts, core_mag));
    } else if (right_singular) {
        accumulate(integrate_blocks(
            g, [=](int k) { return std::pair{b - std::ldexp(right_reserve, -k), b - std::ldexp(right_reserve, -k - 1)}; },
            opts, core_mag));
    }
    return total;
}

}  // namespace jsharp::quad
