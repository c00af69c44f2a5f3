#include "jensen_sharp/oracle.hpp"

#include <cmath>
#include <limits>

#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/quadrature.hpp"
#include "summation.hpp"

namespace jsharp {

std::string to_string(OracleMethod m) {
    switch (m) {
        case OracleMethod::Quadrature: return "quadrature";
        case OracleMethod::ExactSum: return "exact_sum";
        case OracleMethod::MonteCarlo: return "monte_carlo";
    }
    return "quadrature";
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_domain(const FunctionSpec& f, const SupportInterval& region) {
    if (!f.natural_domain.includes(region))
        throw DomainError("region " + region.to_string() + " is not inside the domain of " + f.name);
}

GapEstimate exact_sum(const FunctionSpec& f, const law::Empirical& e, const SupportInterval& region) {
    detail::Accumulator w, wx;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        if (region.contains(e.values[i])) {
            w.add(e.weights[i]);
            wx.add(e.weights[i] * e.values[i]);
        }
    if (!(w.value() > 0)) throw EmptyCellError("cell " + region.to_string() + " has zero probability");
    const double total = w.value();
    const double mu = wx.value() / total;
    const double f_mu = f.eval(mu);
    const double d1_mu = f.deriv1(mu);
    // sum w_i (phi(x_i) - phi(mu)) - phi'(mu) sum w_i (x_i - mu); the second sum
    // is zero in exact arithmetic and removes the rounding of mu to first order.
    detail::Accumulator diff, lin;
    double mag = std::abs(f_mu), lin_mag = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (!region.contains(e.values[i])) continue;
        double wi = e.weights[i] / total;
        double fx = f.eval(e.values[i]);
        if (!std::isfinite(fx)) throw EvaluationError("phi is not finite at sample " + format_real(e.values[i]));
        diff.add(wi * (fx - f_mu));
        lin.add(wi * (e.values[i] - mu));
        mag += wi * std::abs(fx);
        lin_mag += wi * std::abs(e.values[i] - mu);
    }
    GapEstimate out;
    out.method = OracleMethod::ExactSum;
    out.value = diff.value() - d1_mu * lin.value();
    out.error_bound = 4 * kEps * (mag + std::abs(d1_mu) * lin_mag + std::abs(f_mu));
    return out;
}

struct Region {
    SupportInterval interval;
    double prob, mean, center, scale;
};

GapEstimate quadrature_gap(const FunctionSpec& f, const Distribution& d, const Region& r, int budget) {
    const double mu = r.mean;
    const double f_mu = f.eval(mu);
    const double d1_mu = f.deriv1(mu);
    if (!std::isfinite(f_mu) || !std::isfinite(d1_mu)) throw EvaluationError("phi is not finite at the mean");
    auto integrand = [&](double x) {
        double p = d.pdf(x);
        if (p == 0.0) return 0.0;
        double fx = f.eval(x);
        if (std::isnan(fx)) throw EvaluationError("phi is NaN at x = " + format_real(x));
        if (std::isinf(fx)) return fx;
        return (fx - f_mu - d1_mu * (x - mu)) * p / r.prob;
    };
    quad::Options opts;
    opts.max_subdivisions = budget;
    auto q = quad::integrate(integrand, r.interval.lower(), r.interval.upper(), r.center, r.scale, opts);
    GapEstimate out;
    out.method = OracleMethod::Quadrature;
    out.value = q.value;
    out.error_bound = q.diverged ? 0.0 : q.error;
    if (!q.diverged) {
        // rounding floor: the integrand cancels terms of this size pointwise
        auto magnitude = [&](double x) {
            double p = d.pdf(x);
            if (p == 0.0) return 0.0;
            return (std::abs(f.eval(x)) + std::abs(f_mu) + std::abs(d1_mu * (x - mu))) * p / r.prob;
        };
        quad::Options loose = opts;
        loose.rel_tol = 1e-3;
        loose.abs_tol = 0.0;
        auto m = quad::integrate(magnitude, r.interval.lower(), r.interval.upper(), r.center, r.scale, loose);
        if (!m.diverged) out.error_bound += 8.0 * std::numeric_limits<double>::epsilon() * m.value;
    }
    return out;
}

GapEstimate monte_carlo_gap(const FunctionSpec& f, const Distribution& d, const Region& r, long n,
                            std::uint64_t seed) {
    if (n < 2) throw ParameterError("Monte Carlo needs at least 2 samples");
    const auto xs = d.sample(static_cast<std::size_t>(n), seed);
    const double f_mu = f.eval(r.mean);
    detail::Accumulator sum;
    long kept = 0;
    for (double x : xs) {
        if (!r.interval.contains(x)) continue;
        double fx = f.eval(x);
        if (!std::isfinite(fx)) throw EvaluationError("phi is not finite at a sampled point");
        sum.add(fx - f_mu);
        ++kept;
    }
    if (kept < 2) throw NumericError("too few Monte Carlo draws landed in " + r.interval.to_string());
    const double m = sum.value() / kept;
    detail::Accumulator sq;
    for (double x : xs) {
        if (!r.interval.contains(x)) continue;
        double dv = f.eval(x) - f_mu - m;
        sq.add(dv * dv);
    }
    const double sample_var = sq.value() / (kept - 1);
    GapEstimate out;
    out.method = OracleMethod::MonteCarlo;
    out.value = m;
    out.error_bound = 3 * std::sqrt(sample_var / kept);
    out.seed = seed;
    out.samples = n;
    return out;
}

Region region_for(const Distribution& d, const SupportInterval& cell) {
    const auto& s = d.support();
    const auto stats = truncated_stats(d, cell);
    SupportInterval interval = cell.includes(s) ? s : s.intersect(cell);
    double scale = std::sqrt(stats.variance);
    if (!(scale > 0)) scale = 1.0;
    return {interval, stats.prob, stats.mean, stats.mean, scale};
}

GapEstimate estimate_region(const FunctionSpec& f, const Distribution& d, const SupportInterval& cell,
                            const OracleOptions& opts) {
    if (const auto* e = std::get_if<law::Empirical>(&d.law())) {
        if (opts.mode != OracleOptions::Mode::MonteCarlo) {
            if (cell.includes(d.support())) require_domain(f, d.support());
            return exact_sum(f, *e, cell);
        }
    }
    const Region r = region_for(d, cell);
    require_domain(f, r.interval);
    switch (opts.mode) {
        case OracleOptions::Mode::MonteCarlo: return monte_carlo_gap(f, d, r, opts.mc_samples, opts.seed);
        case OracleOptions::Mode::Quadrature: return quadrature_gap(f, d, r, opts.quadrature_budget);
        case OracleOptions::Mode::Auto:
            try {
                return quadrature_gap(f, d, r, opts.quadrature_budget);
            } catch (const QuadratureError&) {
                if (std::holds_alternative<law::CustomPdf>(d.law())) throw;
                return monte_carlo_gap(f, d, r, opts.mc_samples, opts.seed);
            }
    }
    throw NumericError("unknown oracle mode");
}

}  // namespace

GapEstimate estimate_gap(const FunctionSpec& f, const Distribution& d, const OracleOptions& opts) {
    return estimate_region(f, d, d.support(), opts);
}

GapEstimate estimate_conditional_gap(const FunctionSpec& f, const Distribution& d, const SupportInterval& cell,
                                     const OracleOptions& opts) {
    if (!(interval_prob(d, cell) > 0)) throw EmptyCellError("cell " + cell.to_string() + " has zero probability");
    return estimate_region(f, d, cell, opts);
}

}  // namespace jsharp
