#pragma once

#include <functional>

namespace jsharp::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    /// Maximum number of subintervals in one adaptive Gauss-Kronrod run.
    int max_subdivisions = 2000;
    /// Subintervals are not split beyond this bisection depth.
    int max_depth = 60;
    /// Maximum number of geometric blocks used on a tail or singular end.
    int max_blocks = 60;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    /// The integral diverges; value is +inf or -inf.
    bool diverged = false;
    long evaluations = 0;
};

/// 15-point Kronrod rule with the embedded 7-point Gauss rule on [a, b].
/// Returns the Kronrod value and |K - G| as the error estimate.
Result gauss_kronrod15(const std::function<double(double)>& g, double a, double b);

/// Globally adaptive Gauss-Kronrod on a finite [a, b]. Stops when the summed
/// error estimate is below max(abs_tol, rel_tol * |I|). Throws QuadratureError
/// if the subdivision budget runs out first.
Result integrate_finite(const std::function<double(double)>& g, double a, double b, const Options& opts = {});

/// Integral over (a, b) where either end may be infinite and g may blow up at
/// a finite end. `center` and `scale` locate the bulk of the integrand. The
/// core [center - 8 scale, center + 8 scale] (clipped) is integrated
/// adaptively; infinite tails and singular ends are covered by geometric
/// blocks whose contributions must contract, otherwise the integral is
/// reported as divergent.
Result integrate(const std::function<double(double)>& g, double a, double b, double center, double scale,
                 const Options& opts = {});

}  // namespace jsharp::quad
