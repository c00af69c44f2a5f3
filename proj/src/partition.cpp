#include "jensen_sharp/partition.hpp"

#include <cmath>

#include "jensen_sharp/errors.hpp"

namespace jsharp {

PartitionPlan build_partition(const Distribution& d, const std::vector<double>& interior_cuts) {
    const auto& s = d.support();
    for (std::size_t i = 0; i < interior_cuts.size(); ++i) {
        double c = interior_cuts[i];
        if (!std::isfinite(c) || !(c > s.lower() && c <= s.upper()) || (c == s.upper() && !s.upper_closed()))
            throw ParameterError("cut " + format_real(c) + " is not inside the support " + s.to_string());
        if (i > 0 && !(c > interior_cuts[i - 1])) throw ParameterError("cuts must be strictly increasing");
    }
    PartitionPlan plan{{}, {}, Distribution::discrete({d.mean()}, {1.0})};
    plan.cuts.push_back(s.lower());
    plan.cuts.insert(plan.cuts.end(), interior_cuts.begin(), interior_cuts.end());
    plan.cuts.push_back(s.upper());

    const std::size_t m = plan.cuts.size() - 1;
    std::vector<double> means, probs;
    for (std::size_t j = 0; j < m; ++j) {
        const bool first = j == 0, last = j + 1 == m;
        bool lower_closed = first ? s.lower_closed() : true;
        bool upper_closed = last ? s.upper_closed() : false;
        SupportInterval cell(plan.cuts[j], plan.cuts[j + 1], lower_closed, upper_closed);
        if (cell.degenerate() && !last) throw EmptyCellError("cell " + std::to_string(j + 1) + " is empty");
        TruncatedStats st;
        try {
            st = truncated_stats(d, cell);
        } catch (const EmptyCellError&) {
            throw EmptyCellError("cell " + std::to_string(j + 1) + " " + cell.to_string() + " has zero probability");
        }
        plan.cells.push_back({cell, st});
        means.push_back(st.mean);
        probs.push_back(st.prob);
    }
    plan.coarse = Distribution::discrete(std::move(means), std::move(probs));
    return plan;
}

PartitionBounds partition_bounds(const FunctionSpec& f, const PartitionPlan& plan) {
    PartitionBounds out;
    const Distribution& y = plan.coarse;
    const double mu_y = y.mean();
    out.coarse_variance = y.variance();
    if (out.coarse_variance > 0 && !y.support().degenerate()) {
        out.coarse_h = h_extrema(f, y.support(), mu_y);
        out.coarse_lower = ext_mul(out.coarse_h.inf.value, out.coarse_variance);
        out.coarse_upper = ext_mul(out.coarse_h.sup.value, out.coarse_variance);
    } else {
        out.coarse_h.inf = out.coarse_h.sup = HEvaluation{0.0, mu_y, false, HMethod::Direct};
    }

    double lower = out.coarse_lower;
    double upper = out.coarse_upper;
    // Ascending cell order keeps the floating-point totals reproducible.
    for (const auto& cell : plan.cells) {
        CellTerm term;
        const double weight = cell.stats.prob * cell.stats.variance;
        if (weight > 0 && !cell.interval.degenerate()) {
            term.h = h_extrema(f, cell.interval, cell.stats.mean);
            term.lower = ext_mul(term.h.inf.value, weight);
            term.upper = ext_mul(term.h.sup.value, weight);
        } else {
            term.h.inf = term.h.sup = HEvaluation{0.0, cell.stats.mean, false, HMethod::Direct};
        }
        lower += term.lower;
        upper += term.upper;
        out.cells.push_back(term);
    }
    if (std::isnan(lower) || std::isnan(upper)) throw NumericError("partition bound evaluated to NaN");

    auto& b = out.bounds;
    b.lower = lower;
    b.upper = upper;
    b.lower_detail = out.coarse_h.inf;
    b.upper_detail = out.coarse_h.sup;
    b.mean_used = mu_y;
    // var(X) = var(Y) + sum eta_j var_j
    double total_var = out.coarse_variance;
    for (const auto& cell : plan.cells) total_var += cell.stats.prob * cell.stats.variance;
    b.variance_used = total_var;
    b.method = BoundMethod::Partition;
    return out;
}

bool positivity_certificate(const FunctionSpec& f, const Distribution& d, const SupportInterval& window) {
    try {
        if (!f.natural_domain.includes(window)) return false;
        const double prob = interval_prob(d, window);
        if (!(prob > 0)) return false;
        const auto stats = truncated_stats(d, window);
        if (!(stats.variance > 0)) return false;
        const double center = window.bounded() ? 0.5 * (window.lower() + window.upper()) : stats.mean;
        const auto ext = curvature_extrema(f, window, center);
        return ext.inf.value > 0;
    } catch (const Error&) {
        return false;
    }
}

}  // namespace jsharp
