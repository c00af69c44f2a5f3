#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "jensen_sharp/interval.hpp"

namespace jsharp {

/// Shape of phi'. Convex phi' makes h(x; nu) nondecreasing in x, concave
/// makes it nonincreasing.
enum class PhiPrimeShape { Convex, Concave, Unknown };

std::string to_string(PhiPrimeShape shape);

using RealMap = std::function<double(double)>;

/// Analytic limit of h(x; nu) as x approaches `endpoint`, when known.
/// Returns nullopt to defer to numeric evaluation.
using HLimitHint = std::function<std::optional<double>(double endpoint, double nu)>;

/// Cancellation-free evaluation of h(x; nu) away from x == nu.
using HKernel = std::function<double(double x, double nu)>;

/// A twice differentiable phi with its derivatives. Immutable once built;
/// copies share the underlying callables.
struct FunctionSpec {
    std::string name;
    RealMap eval;
    RealMap deriv1;
    RealMap deriv2;
    SupportInterval natural_domain;
    PhiPrimeShape phi_prime_shape = PhiPrimeShape::Unknown;
    HLimitHint h_limit_hint;  // may be empty
    HKernel h_kernel;         // may be empty
};

namespace catalog {
struct ExpScaled {
    double t;
};
struct Power {
    double p;
};
struct NegLog {};
/// c2 x^2 + c1 x + c0
struct Quadratic {
    double c2, c1, c0;
};
}  // namespace catalog

using CatalogKind = std::variant<catalog::ExpScaled, catalog::Power, catalog::NegLog, catalog::Quadratic>;

/// Builds a catalog phi. Throws ParameterError for t == 0 or p == 0.
FunctionSpec make_catalog_function(const CatalogKind& kind);

/// Wraps user-supplied phi, phi', phi'' on `domain`.
FunctionSpec make_custom_function(std::string name, RealMap eval, RealMap deriv1, RealMap deriv2,
                                  SupportInterval domain, PhiPrimeShape shape = PhiPrimeShape::Unknown);

/// Returns a copy of `f` with the shape tag cleared, so every consumer takes
/// the global-search path.
FunctionSpec with_unknown_shape(FunctionSpec f);

/// Finite probe window for shape classification: the natural domain clamped to
/// mean +/- 8 sigma, pulled slightly inside open finite endpoints.
SupportInterval probe_window(const SupportInterval& domain, double mean_hint, double sigma_hint);

/// Midpoint-convexity test of phi' on every pair of `probe_grid_size` evenly
/// spaced points of `window`. Throws EvaluationError if phi' is non-finite at
/// a probe and ParameterError if probe_grid_size < 8.
PhiPrimeShape classify_phi_prime_shape(const FunctionSpec& f, const SupportInterval& window, int probe_grid_size);

/// Same, on the default probe window of f's natural domain.
PhiPrimeShape classify_phi_prime_shape(const FunctionSpec& f, int probe_grid_size);

}  // namespace jsharp
