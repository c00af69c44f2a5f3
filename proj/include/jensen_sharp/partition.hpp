#pragma once

#include <vector>

#include "jensen_sharp/bounds.hpp"
#include "jensen_sharp/distributions.hpp"
#include "jensen_sharp/functions.hpp"

namespace jsharp {

struct PartitionCell {
    SupportInterval interval;
    TruncatedStats stats;
};

/// Cells I_j = [x_{j-1}, x_j) over the support with their conditional
/// statistics, and the coarse discrete law P(Y = mu_j) = eta_j.
struct PartitionPlan {
    std::vector<double> cuts;  // x_0 < x_1 < ... < x_m, endpoints included
    std::vector<PartitionCell> cells;
    Distribution coarse;
};

/// Builds the plan for interior cut points (strictly increasing, inside the
/// support). Throws EmptyCellError naming the first zero-probability cell.
PartitionPlan build_partition(const Distribution& d, const std::vector<double>& interior_cuts);

struct CellTerm {
    Extrema h;  // extrema of h(.; mu_j) over the cell
    double lower = 0.0;  // eta_j * inf h * var_j
    double upper = 0.0;
};

struct PartitionBounds {
    GapBounds bounds;
    Extrema coarse_h;  // extrema of h(.; EY) over [mu_1, mu_m]
    double coarse_variance = 0.0;
    double coarse_lower = 0.0;
    double coarse_upper = 0.0;
    std::vector<CellTerm> cells;
};

/// Coarse term plus the eta-weighted per-cell terms; the upper bound replaces
/// every inf with sup.
PartitionBounds partition_bounds(const FunctionSpec& f, const PartitionPlan& plan);

/// True when phi'' is bounded away from zero on `window` and X has positive
/// probability and positive conditional spread there, which forces a
/// strictly positive Jensen gap.
bool positivity_certificate(const FunctionSpec& f, const Distribution& d, const SupportInterval& window);

}  // namespace jsharp
