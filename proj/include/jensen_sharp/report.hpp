#pragma once

#include "json.hpp"

#include "jensen_sharp/bounds.hpp"
#include "jensen_sharp/oracle.hpp"
#include "jensen_sharp/partition.hpp"

namespace jsharp::report {

/// Number, or the strings "inf" / "-inf".
nlohmann::json extended(double x);

/// {lower, upper, variance, method, witness_lower, witness_upper}
nlohmann::json to_json(const GapBounds& b);

/// {value, error_bound, method}; Monte Carlo adds seed and samples.
nlohmann::json to_json(const GapEstimate& e);

nlohmann::json to_json(const SupportInterval& s);

/// Per-cell table plus the coarse term and the assembled bounds.
nlohmann::json to_json(const PartitionPlan& plan, const PartitionBounds& pb);

/// lower - 3 err <= value <= upper + 3 err
bool brackets(const GapBounds& b, const GapEstimate& e);

}  // namespace jsharp::report
