#include "jensen_sharp/report.hpp"

#include <cmath>

namespace jsharp::report {

using nlohmann::json;

json extended(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

json to_json(const GapBounds& b) {
    return {
        {"lower", extended(b.lower)},
        {"upper", extended(b.upper)},
        {"variance", b.variance_used},
        {"method", to_string(b.method)},
        {"witness_lower", extended(b.lower_detail.at)},
        {"witness_upper", extended(b.upper_detail.at)},
    };
}

json to_json(const GapEstimate& e) {
    json j = {
        {"value", extended(e.value)},
        {"error_bound", e.error_bound},
        {"method", to_string(e.method)},
    };
    if (e.method == OracleMethod::MonteCarlo) {
        j["seed"] = e.seed;
        j["samples"] = e.samples;
    }
    return j;
}

json to_json(const SupportInterval& s) {
    return {
        {"lower", extended(s.lower())},
        {"upper", extended(s.upper())},
        {"lower_closed", s.lower_closed()},
        {"upper_closed", s.upper_closed()},
    };
}

json to_json(const PartitionPlan& plan, const PartitionBounds& pb) {
    json cells = json::array();
    for (std::size_t j = 0; j < plan.cells.size(); ++j) {
        const auto& c = plan.cells[j];
        const auto& t = pb.cells[j];
        cells.push_back({
            {"interval", to_json(c.interval)},
            {"prob", c.stats.prob},
            {"mean", c.stats.mean},
            {"variance", c.stats.variance},
            {"inf_h", extended(t.h.inf.value)},
            {"sup_h", extended(t.h.sup.value)},
            {"lower_term", extended(t.lower)},
            {"upper_term", extended(t.upper)},
        });
    }
    json cuts = json::array();
    for (double c : plan.cuts) cuts.push_back(extended(c));
    return {
        {"cuts", cuts},
        {"cells", cells},
        {"coarse",
         {
             {"variance", pb.coarse_variance},
             {"inf_h", extended(pb.coarse_h.inf.value)},
             {"sup_h", extended(pb.coarse_h.sup.value)},
             {"lower_term", extended(pb.coarse_lower)},
             {"upper_term", extended(pb.coarse_upper)},
         }},
        {"bounds", to_json(pb.bounds)},
    };
}

bool brackets(const GapBounds& b, const GapEstimate& e) {
    const double slack = 3 * e.error_bound;
    if (std::isinf(e.value)) return e.value > 0 ? b.upper == e.value : b.lower == e.value;
    return b.lower - slack <= e.value && e.value <= b.upper + slack;
}

}  // namespace jsharp::report
