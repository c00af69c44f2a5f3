#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jensen_sharp/distributions.hpp"
#include "jensen_sharp/functions.hpp"
#include "jensen_sharp/interval.hpp"

namespace jsharp {

enum class HMethod { Direct, TaylorNearCenter, EndpointLimit };
enum class BoundMethod { Theorem1, Corollary1, Curvature, Partition };

std::string to_string(HMethod m);
std::string to_string(BoundMethod m);

/// One value of h (or of phi''/2 for curvature bounds) and where it was taken.
struct HEvaluation {
    double value = 0.0;
    double at = 0.0;  // may be +-inf when the value is an endpoint limit
    bool at_endpoint = false;
    HMethod method = HMethod::Direct;
};

struct Extrema {
    HEvaluation inf;
    HEvaluation sup;
};

/// Lower and upper bounds on E[phi(X)] - phi(E[X]).
struct GapBounds {
    double lower = 0.0;
    double upper = 0.0;
    HEvaluation lower_detail;
    HEvaluation upper_detail;
    double mean_used = 0.0;
    double variance_used = 0.0;
    BoundMethod method = BoundMethod::Theorem1;
};

/// Radius below which h(x; nu) is replaced by its removable-singularity
/// value phi''(nu)/2: cbrt(machine epsilon) * max(1, |nu|).
double h_switch_radius(double nu);

/// h(x; nu) = (phi(x) - phi(nu)) / (x - nu)^2 - phi'(nu) / (x - nu).
/// Throws EvaluationError when phi(x) is not finite.
HEvaluation h_eval(const FunctionSpec& f, double nu, double x);

/// Limit of h(x; nu) as x approaches `endpoint` (finite or infinite). Uses the
/// catalog hint when present, direct evaluation at finite endpoints where phi
/// is defined, and otherwise a geometric approach sequence. Throws
/// LimitUndeterminedError when the sequence oscillates.
double h_endpoint_limit(const FunctionSpec& f, double nu, double endpoint);

/// Infimum and supremum of h(.; nu) over `interval`. Uses endpoint limits when
/// phi' has a known shape, a grid scan with golden-section refinement otherwise.
Extrema h_extrema(const FunctionSpec& f, const SupportInterval& interval, double nu);

/// inf h * var(X) <= gap <= sup h * var(X), extrema over the support of d.
GapBounds jensen_bounds(const FunctionSpec& f, const Distribution& d);

/// The same on an equal-weight sample, with extrema over [min, max] and the
/// n-divisor variance. Throws ParameterError for fewer than 2 points.
GapBounds sample_bounds(const FunctionSpec& f, const std::vector<double>& xs);

/// Cruder bounds with inf/sup of phi''/2 in place of inf/sup of h.
GapBounds curvature_bounds(const FunctionSpec& f, const Distribution& d);

/// Extrema of phi''/2 over an interval, by the same machinery as h_extrema.
Extrema curvature_extrema(const FunctionSpec& f, const SupportInterval& interval, double center);

struct PowerMeanBracket {
    double p = 0.0;  // s / r
    double moment_lower = 0.0;  // bracket on E[X^s]
    double moment_upper = 0.0;
    double mean_lower = 0.0;  // bracket on M_s = (E X^s)^{1/s}
    double mean_upper = 0.0;
    GapBounds gap;  // bounds on E[Y^p] - (E Y)^p with Y = X^r
};

/// Brackets E[X^s] through Y = X^r and phi(y) = y^(s/r).
PowerMeanBracket power_mean_bounds(const Distribution& d, double r, double s);

struct MeanBracket {
    double lower = 0.0;  // bracket on phi^{-1}(E[phi(X)])
    double upper = 0.0;
    double expectation_lower = 0.0;  // bracket on E[phi(X)]
    double expectation_upper = 0.0;
    GapBounds gap;
};

/// Brackets the generalized mean phi^{-1}(E[phi(X)]) for strictly monotone phi.
/// Ends that leave the range of phi map to the matching support boundary.
MeanBracket generalized_mean_bounds(const FunctionSpec& f, const std::function<double(double)>& f_inverse,
                                    const Distribution& d);

namespace detail {

enum class Trend { Increasing, Decreasing, Unknown };

/// Limit of g(x) as x -> endpoint along a geometric sequence starting at `from`.
double approach_limit(const std::function<double(double)>& g, double from, double endpoint);

/// inf/sup of g over `interval`. `limit` supplies endpoint values. With a known
/// trend only the endpoints are consulted; otherwise a 512-point grid around
/// `center` (log-spaced toward infinite ends) is scanned and every local
/// extremum is refined by golden section.
Extrema find_extrema(const std::function<double(double)>& g, const std::function<double(double)>& limit,
                     const SupportInterval& interval, double center, Trend trend,
                     const std::function<HMethod(double)>& method_at = {});

}  // namespace detail

}  // namespace jsharp
