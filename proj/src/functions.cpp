#include "jensen_sharp/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "jensen_sharp/errors.hpp"

namespace jsharp {

std::string to_string(PhiPrimeShape shape) {
    switch (shape) {
        case PhiPrimeShape::Convex: return "convex";
        case PhiPrimeShape::Concave: return "concave";
        case PhiPrimeShape::Unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// Below these magnitudes the series are used; the truncation error is far
// below one ulp of the leading term.
constexpr double kSeriesCutoff = 1e-3;

// (e^z - 1 - z) / z^2
double exp_second_difference(double z) {
    if (std::abs(z) < kSeriesCutoff) {
        return 0.5 + z * (1.0 / 6 + z * (1.0 / 24 + z * (1.0 / 120 + z / 720)));
    }
    return (std::expm1(z) - z) / (z * z);
}

// (u - log1p(u)) / u^2, u > -1
double log_second_difference(double u) {
    if (std::abs(u) < kSeriesCutoff) {
        return 0.5 + u * (-1.0 / 3 + u * (0.25 + u * (-0.2 + u * (1.0 / 6 - u / 7))));
    }
    return (u - std::log1p(u)) / (u * u);
}

// ((1 + u)^p - 1 - p u) / u^2, u > -1
double power_second_difference(double p, double u) {
    if (std::abs(u) < kSeriesCutoff) {
        // binomial coefficients C(p, k) for k = 2..7
        double sum = 0.0;
        double coef = p * (p - 1) / 2;
        double upow = 1.0;
        for (int k = 2; k <= 7; ++k) {
            sum += coef * upow;
            coef *= (p - k) / (k + 1);
            upow *= u;
        }
        return sum;
    }
    return (std::expm1(p * std::log1p(u)) - p * u) / (u * u);
}

FunctionSpec exp_scaled(double t) {
    if (!(t != 0.0) || !std::isfinite(t)) throw ParameterError("exp: t must be finite and nonzero");
    FunctionSpec f;
    std::ostringstream name;
    name << "exp:t=" << format_real(t);
    f.name = name.str();
    f.eval = [t](double x) { return std::exp(t * x); };
    f.deriv1 = [t](double x) { return t * std::exp(t * x); };
    f.deriv2 = [t](double x) { return t * t * std::exp(t * x); };
    f.natural_domain = SupportInterval::real_line();
    f.phi_prime_shape = t > 0 ? PhiPrimeShape::Convex : PhiPrimeShape::Concave;
    // h grows like e^{tx}/x^2 on the side where e^{tx} explodes, decays to 0 on the other.
    f.h_limit_hint = [t](double endpoint, double) -> std::optional<double> {
        if (std::isinf(endpoint)) return (endpoint > 0) == (t > 0) ? kInf : 0.0;
        return std::nullopt;
    };
    f.h_kernel = [t](double x, double nu) {
        double z = t * (x - nu);
        if (std::abs(z) <= 1.0) return t * t * std::exp(t * nu) * exp_second_difference(z);
        double d = x - nu;
        return (std::exp(t * x) - std::exp(t * nu)) / (d * d) - t * std::exp(t * nu) / d;
    };
    return f;
}

FunctionSpec power(double p) {
    if (!(p != 0.0) || !std::isfinite(p)) throw ParameterError("power: p must be finite and nonzero");
    FunctionSpec f;
    f.name = "power:p=" + format_real(p);
    f.eval = [p](double x) { return std::pow(x, p); };
    f.deriv1 = [p](double x) { return p * std::pow(x, p - 1); };
    f.deriv2 = [p](double x) { return p * (p - 1) * std::pow(x, p - 2); };
    f.natural_domain = SupportInterval::positive();
    // Sign of phi''' = p(p-1)(p-2) x^{p-3}; p = 1 and p = 2 are tagged convex.
    bool convex = p >= 2 || (p > 0 && p <= 1);
    f.phi_prime_shape = convex ? PhiPrimeShape::Convex : PhiPrimeShape::Concave;
    f.h_limit_hint = [p](double endpoint, double nu) -> std::optional<double> {
        if (endpoint == 0.0) return p < 0 ? kInf : (p - 1) * std::pow(nu, p - 2);
        if (endpoint == kInf) return p > 2 ? kInf : (p == 2 ? 1.0 : 0.0);
        return std::nullopt;
    };
    f.h_kernel = [p](double x, double nu) {
        double u = (x - nu) / nu;
        if (std::abs(u) <= 1.0) return std::pow(nu, p - 2) * power_second_difference(p, u);
        double d = x - nu;
        return (std::pow(x, p) - std::pow(nu, p)) / (d * d) - p * std::pow(nu, p - 1) / d;
    };
    return f;
}

FunctionSpec neg_log() {
    FunctionSpec f;
    f.name = "neglog";
    f.eval = [](double x) { return -std::log(x); };
    f.deriv1 = [](double x) { return -1.0 / x; };
    f.deriv2 = [](double x) { return 1.0 / (x * x); };
    f.natural_domain = SupportInterval::positive();
    f.phi_prime_shape = PhiPrimeShape::Concave;
    f.h_limit_hint = [](double endpoint, double) -> std::optional<double> {
        if (endpoint == 0.0) return kInf;
        if (endpoint == kInf) return 0.0;
        return std::nullopt;
    };
    f.h_kernel = [](double x, double nu) {
        double u = (x - nu) / nu;
        if (u <= 1.0) return log_second_difference(u) / (nu * nu);
        double d = x - nu;
        return (std::log(nu) - std::log(x)) / (d * d) + 1.0 / (nu * d);
    };
    return f;
}

FunctionSpec quadratic(double c2, double c1, double c0) {
    if (!std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0))
        throw ParameterError("quad: coefficients must be finite");
    FunctionSpec f;
    f.name = "quad:a=" + format_real(c2) + ",b=" + format_real(c1) + ",c=" + format_real(c0);
    f.eval = [=](double x) { return (c2 * x + c1) * x + c0; };
    f.deriv1 = [=](double x) { return 2 * c2 * x + c1; };
    f.deriv2 = [=](double) { return 2 * c2; };
    f.natural_domain = SupportInterval::real_line();
    // phi' is affine: both convex and concave. h is the constant c2.
    f.phi_prime_shape = PhiPrimeShape::Convex;
    f.h_limit_hint = [c2](double endpoint, double) -> std::optional<double> {
        if (std::isinf(endpoint)) return c2;
        return std::nullopt;
    };
    f.h_kernel = [c2](double, double) { return c2; };
    return f;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

FunctionSpec make_catalog_function(const CatalogKind& kind) {
    return std::visit(overloaded{
                          [](const catalog::ExpScaled& k) { return exp_scaled(k.t); },
                          [](const catalog::Power& k) { return power(k.p); },
                          [](const catalog::NegLog&) { return neg_log(); },
                          [](const catalog::Quadratic& k) { return quadratic(k.c2, k.c1, k.c0); },
                      },
                      kind);
}

FunctionSpec make_custom_function(std::string name, RealMap eval, RealMap deriv1, RealMap deriv2,
                                  SupportInterval domain, PhiPrimeShape shape) {
    if (!eval || !deriv1 || !deriv2) throw ParameterError("custom function needs phi, phi' and phi''");
    FunctionSpec f;
    f.name = std::move(name);
    f.eval = std::move(eval);
    f.deriv1 = std::move(deriv1);
    f.deriv2 = std::move(deriv2);
    f.natural_domain = domain;
    f.phi_prime_shape = shape;
    return f;
}

FunctionSpec with_unknown_shape(FunctionSpec f) {
    f.phi_prime_shape = PhiPrimeShape::Unknown;
    return f;
}

SupportInterval probe_window(const SupportInterval& domain, double mean_hint, double sigma_hint) {
    double lo = std::max(domain.lower(), mean_hint - 8 * sigma_hint);
    double hi = std::min(domain.upper(), mean_hint + 8 * sigma_hint);
    if (!(lo < hi)) throw DomainError("probe window is empty");
    double pull = 1e-3 * (hi - lo);
    if (lo == domain.lower() && !domain.lower_closed()) lo += pull;
    if (hi == domain.upper() && !domain.upper_closed()) hi -= pull;
    return SupportInterval::closed(lo, hi);
}

namespace {

SupportInterval default_probe_window(const SupportInterval& d) {
    double lo, hi;
    if (d.bounded()) {
        double pull = 1e-3 * d.width();
        lo = d.lower() + (d.lower_closed() ? 0.0 : pull);
        hi = d.upper() - (d.upper_closed() ? 0.0 : pull);
    } else if (d.lower_finite()) {
        lo = d.lower() + (d.lower_closed() ? 0.0 : 0.1);
        hi = d.lower() + 10.0;
    } else if (d.upper_finite()) {
        hi = d.upper() - (d.upper_closed() ? 0.0 : 0.1);
        lo = d.upper() - 10.0;
    } else {
        lo = -5.0;
        hi = 5.0;
    }
    return SupportInterval::closed(lo, hi);
}

}  // namespace

PhiPrimeShape classify_phi_prime_shape(const FunctionSpec& f, const SupportInterval& window, int probe_grid_size) {
    if (probe_grid_size < 8) throw ParameterError("probe_grid_size must be at least 8");
    if (!window.bounded()) throw DomainError("shape probe window must be finite: " + window.to_string());
    const int n = probe_grid_size;
    std::vector<double> xs(n), d1(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = window.lower() + window.width() * i / (n - 1);
        d1[i] = f.deriv1(xs[i]);
        if (!std::isfinite(d1[i]))
            throw EvaluationError("phi' is not finite at probe x = " + format_real(xs[i]));
    }
    bool convex = true, concave = true;
    for (int i = 0; i < n && (convex || concave); ++i) {
        for (int j = i + 1; j < n; ++j) {
            double mid = f.deriv1(0.5 * (xs[i] + xs[j]));
            if (!std::isfinite(mid)) throw EvaluationError("phi' is not finite inside the probe window");
            double chord = 0.5 * (d1[i] + d1[j]);
            double slack = 1e-9 * std::max({1.0, std::abs(d1[i]), std::abs(d1[j]), std::abs(mid)});
            if (mid > chord + slack) convex = false;
            if (mid < chord - slack) concave = false;
        }
    }
    if (convex) return PhiPrimeShape::Convex;
    if (concave) return PhiPrimeShape::Concave;
    return PhiPrimeShape::Unknown;
}

PhiPrimeShape classify_phi_prime_shape(const FunctionSpec& f, int probe_grid_size) {
    return classify_phi_prime_shape(f, default_probe_window(f.natural_domain), probe_grid_size);
}

}  // namespace jsharp
