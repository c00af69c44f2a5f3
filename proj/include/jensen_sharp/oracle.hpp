#pragma once

#include <cstdint>
#include <string>

#include "jensen_sharp/distributions.hpp"
#include "jensen_sharp/functions.hpp"

namespace jsharp {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr long kDefaultMonteCarloSamples = 1'000'000;

enum class OracleMethod { Quadrature, ExactSum, MonteCarlo };

std::string to_string(OracleMethod m);

/// Independent estimate of E[phi(X)] - phi(E[X]).
struct GapEstimate {
    double value = 0.0;  // +inf when the expectation diverges
    double error_bound = 0.0;
    OracleMethod method = OracleMethod::Quadrature;
    std::uint64_t seed = 0;  // Monte Carlo only
    long samples = 0;        // Monte Carlo only
};

struct OracleOptions {
    enum class Mode { Auto, Quadrature, MonteCarlo };
    Mode mode = Mode::Auto;
    long mc_samples = kDefaultMonteCarloSamples;
    std::uint64_t seed = kDefaultSeed;
    int quadrature_budget = 2000;
};

/// Exact summation for discrete laws, adaptive quadrature for densities, and
/// seeded Monte Carlo when requested or when quadrature fails.
GapEstimate estimate_gap(const FunctionSpec& f, const Distribution& d, const OracleOptions& opts = {});

/// E[phi(X) | X in cell] - phi(E[X | X in cell]). Throws EmptyCellError for a
/// zero-probability cell.
GapEstimate estimate_conditional_gap(const FunctionSpec& f, const Distribution& d, const SupportInterval& cell,
                                     const OracleOptions& opts = {});

}  // namespace jsharp
