#pragma once

#include <cmath>
#include <vector>

#include "doctest.h"
#include "jensen_sharp/functions.hpp"

#define CHECK_NEAR(a, b, tol)                                                                   \
    do {                                                                                        \
        const double a_ = (a), b_ = (b), t_ = (tol);                                            \
        CHECK_MESSAGE(std::abs(a_ - b_) <= t_, #a " = " << a_ << ", expected " << b_ << " +- " << t_); \
    } while (0)

namespace testing {

inline std::vector<jsharp::CatalogKind> catalog_grid() {
    using namespace jsharp::catalog;
    std::vector<jsharp::CatalogKind> out;
    for (double t : {-1.0, -0.5, 0.5, 1.0, 2.0}) out.emplace_back(ExpScaled{t});
    for (double p : {-2.0, -1.0, 0.5, 1.0, 1.5, 2.0, 3.0}) out.emplace_back(Power{p});
    out.emplace_back(NegLog{});
    out.emplace_back(Quadratic{1.0, 0.0, 0.0});
    out.emplace_back(Quadratic{0.5, -2.0, 1.0});
    return out;
}

}  // namespace testing
