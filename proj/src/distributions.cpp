#include "jensen_sharp/distributions.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/quadrature.hpp"
#include "summation.hpp"

namespace jsharp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

using detail::Accumulator;

double std_normal_pdf(double z) { return std::isinf(z) ? 0.0 : kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double std_normal_sf(double z) { return 0.5 * std::erfc(z * kInvSqrt2); }

// P(alpha < Z < beta) without cancellation in either tail.
double std_normal_mass(double alpha, double beta) {
    if (alpha >= 0) return std_normal_sf(alpha) - std_normal_sf(beta);
    if (beta <= 0) return std_normal_cdf(beta) - std_normal_cdf(alpha);
    return 1.0 - std_normal_sf(beta) - std_normal_cdf(alpha);
}

// z * pdf(z), zero at infinity.
double z_pdf(double z) { return std::isinf(z) ? 0.0 : z * std_normal_pdf(z); }

// 1 - u / expm1(u): mean of a unit-rate exponential truncated to [0, u), times rate.
double trunc_exp_mean_factor(double u) {
    if (std::isinf(u)) return 1.0;
    if (u < 1e-3) return u / 2 - u * u / 12 + u * u * u * u / 720;
    return 1.0 - u / std::expm1(u);
}

// 1 - (v / sinh v)^2 with v = u / 2: variance factor of the truncated exponential.
double trunc_exp_var_factor(double u) {
    if (std::isinf(u)) return 1.0;
    double v = 0.5 * u;
    double s = std::sinh(v);
    if (std::isinf(s)) return 1.0;
    double sinh_minus_v;
    if (v < 0.1) {
        double v2 = v * v;
        sinh_minus_v = v * v2 * (1.0 / 6 + v2 * (1.0 / 120 + v2 * (1.0 / 5040 + v2 / 362880)));
    } else {
        sinh_minus_v = s - v;
    }
    return sinh_minus_v * (s + v) / (s * s);
}

// Mean and variance of pdf restricted to [a, b], by quadrature.
TruncatedStats integrate_stats(const std::function<double(double)>& pdf, double a, double b, double center,
                               double scale, int budget) {
    quad::Options opts;
    opts.max_subdivisions = budget;
    // Tight absolute tolerance: the moments must resolve small cells.
    opts.abs_tol = 1e-14;
    opts.rel_tol = 1e-11;
    auto mass = quad::integrate(pdf, a, b, center, scale, opts);
    if (mass.diverged) throw QuadratureError("density does not integrate to a finite mass");
    TruncatedStats s;
    s.prob = mass.value;
    if (!(s.prob > 0)) return s;
    double c = std::clamp(center, a, b);
    auto first = quad::integrate([&](double x) { return (x - c) * pdf(x); }, a, b, center, scale, opts);
    if (first.diverged) throw QuadratureError("density has no finite mean");
    double shift = first.value / s.prob;
    s.mean = c + shift;
    auto second = quad::integrate(
        [&](double x) {
            double d = x - s.mean;
            return d * d * pdf(x);
        },
        a, b, center, scale, opts);
    if (second.diverged) throw QuadratureError("density has no finite variance");
    s.variance = std::max(0.0, second.value / s.prob);
    return s;
}

void check_finite_positive(double v, const char* what) {
    if (!(v > 0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite and positive");
}

}  // namespace

Distribution Distribution::normal(double mu, double sigma) {
    if (!std::isfinite(mu)) throw ParameterError("normal: mu must be finite");
    check_finite_positive(sigma, "normal: sigma");
    return {law::Normal{mu, sigma}, SupportInterval::real_line()};
}

Distribution Distribution::exponential(double rate) {
    check_finite_positive(rate, "exp: rate");
    return {law::Exponential{rate}, SupportInterval::positive()};
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw ParameterError("uniform: need finite lo < hi");
    return {law::Uniform{lo, hi}, SupportInterval::open(lo, hi)};
}

Distribution Distribution::empirical(std::vector<double> samples) {
    if (samples.size() < 2) throw ParameterError("need at least 2 samples");
    std::vector<double> weights(samples.size(), 1.0 / static_cast<double>(samples.size()));
    return discrete(std::move(samples), std::move(weights));
}

Distribution Distribution::discrete(std::vector<double> values, std::vector<double> weights) {
    if (values.empty()) throw ParameterError("discrete law needs at least one value");
    if (values.size() != weights.size()) throw ParameterError("discrete law: values and weights differ in length");
    Accumulator total;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ParameterError("sample value is not finite");
        if (!(weights[i] >= 0) || !std::isfinite(weights[i])) throw ParameterError("weights must be finite and >= 0");
        total.add(weights[i]);
    }
    if (!(total.value() > 0)) throw ParameterError("discrete law has zero total weight");
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    law::Empirical e;
    e.values.reserve(values.size());
    e.weights.reserve(values.size());
    for (auto i : order) {
        e.values.push_back(values[i]);
        e.weights.push_back(weights[i] / total.value());
    }
    SupportInterval support = SupportInterval::closed(e.values.front(), e.values.back());
    return {std::move(e), support};
}

Distribution Distribution::custom_pdf(std::function<double(double)> pdf, SupportInterval support, int quadrature_budget,
                                      double center, double scale) {
    if (!pdf) throw ParameterError("custom pdf is empty");
    if (quadrature_budget < 1) throw ParameterError("quadrature budget must be positive");
    law::CustomPdf c;
    c.pdf = std::move(pdf);
    c.support = support;
    c.quadrature_budget = quadrature_budget;
    c.center = std::isfinite(center) ? center : 0.0;
    c.scale = (scale > 0 && std::isfinite(scale)) ? scale : 1.0;
    auto stats = integrate_stats(c.pdf, support.lower(), support.upper(), c.center, c.scale, quadrature_budget);
    if (!(stats.prob > 0) || !std::isfinite(stats.prob)) throw ParameterError("custom pdf has no positive finite mass");
    c.normalizer = stats.prob;
    c.mean = stats.mean;
    c.variance = stats.variance;
    if (!std::isfinite(c.mean) || !std::isfinite(c.variance))
        throw ParameterError("custom pdf must have finite mean and variance");
    return {std::move(c), support};
}

double Distribution::mean() const {
    return std::visit(overloaded{
                          [](const law::Normal& n) { return n.mu; },
                          [](const law::Exponential& e) { return 1.0 / e.rate; },
                          [](const law::Uniform& u) { return 0.5 * (u.lo + u.hi); },
                          [](const law::Empirical& e) {
                              Accumulator acc;
                              for (std::size_t i = 0; i < e.values.size(); ++i) acc.add(e.weights[i] * e.values[i]);
                              return acc.value();
                          },
                          [](const law::CustomPdf& c) { return c.mean; },
                      },
                      law_);
}

double Distribution::variance() const {
    return std::visit(overloaded{
                          [](const law::Normal& n) { return n.sigma * n.sigma; },
                          [](const law::Exponential& e) { return 1.0 / (e.rate * e.rate); },
                          [](const law::Uniform& u) { return (u.hi - u.lo) * (u.hi - u.lo) / 12; },
                          [this](const law::Empirical& e) {
                              const double m = mean();
                              Accumulator acc;
                              for (std::size_t i = 0; i < e.values.size(); ++i) {
                                  double d = e.values[i] - m;
                                  acc.add(e.weights[i] * d * d);
                              }
                              return acc.value();
                          },
                          [](const law::CustomPdf& c) { return c.variance; },
                      },
                      law_);
}

double Distribution::pdf(double x) const {
    if (!support_.contains(x) && !(x == support_.lower() || x == support_.upper())) return 0.0;
    return std::visit(overloaded{
                          [x](const law::Normal& n) { return std_normal_pdf((x - n.mu) / n.sigma) / n.sigma; },
                          [x](const law::Exponential& e) { return e.rate * std::exp(-e.rate * x); },
                          [](const law::Uniform& u) { return 1.0 / (u.hi - u.lo); },
                          [](const law::Empirical&) -> double {
                              throw DomainError("a discrete law has no density");
                          },
                          [x](const law::CustomPdf& c) { return c.pdf(x) / c.normalizer; },
                      },
                      law_);
}

double Distribution::cdf(double x) const {
    return std::visit(overloaded{
                          [x](const law::Normal& n) { return std_normal_cdf((x - n.mu) / n.sigma); },
                          [x](const law::Exponential& e) { return x <= 0 ? 0.0 : -std::expm1(-e.rate * x); },
                          [x](const law::Uniform& u) { return std::clamp((x - u.lo) / (u.hi - u.lo), 0.0, 1.0); },
                          [x](const law::Empirical& e) {
                              Accumulator acc;
                              for (std::size_t i = 0; i < e.values.size() && e.values[i] <= x; ++i) acc.add(e.weights[i]);
                              return std::min(1.0, acc.value());
                          },
                          [this, x](const law::CustomPdf& c) {
                              if (x <= support_.lower()) return 0.0;
                              if (x >= support_.upper()) return 1.0;
                              return interval_prob(*this, SupportInterval(support_.lower(), x, false, true));
                          },
                      },
                      law_);
}

double Distribution::quantile(double p) const {
    if (!(p >= 0 && p <= 1)) throw ParameterError("quantile level must lie in [0, 1]");
    return std::visit(
        overloaded{
            [p](const law::Normal& n) {
                if (p == 0) return -kInf;
                if (p == 1) return kInf;
                return boost::math::quantile(boost::math::normal(n.mu, n.sigma), p);
            },
            [p](const law::Exponential& e) { return p == 1 ? kInf : -std::log1p(-p) / e.rate; },
            [p](const law::Uniform& u) { return u.lo + p * (u.hi - u.lo); },
            [p](const law::Empirical& e) {
                // nearest rank: smallest value whose cumulative weight reaches p
                Accumulator acc;
                for (std::size_t i = 0; i < e.values.size(); ++i) {
                    acc.add(e.weights[i]);
                    if (acc.value() >= p - 1e-12) return e.values[i];
                }
                return e.values.back();
            },
            [this, p](const law::CustomPdf& c) {
                if (p == 0) return support_.lower();
                if (p == 1) return support_.upper();
                double sd = std::sqrt(c.variance);
                double lo = support_.lower_finite() ? support_.lower() : c.mean - 8 * sd;
                double hi = support_.upper_finite() ? support_.upper() : c.mean + 8 * sd;
                auto f = [&](double x) { return cdf(x) - p; };
                while (!support_.lower_finite() && f(lo) > 0) lo = c.mean - 2 * (c.mean - lo);
                while (!support_.upper_finite() && f(hi) < 0) hi = c.mean + 2 * (hi - c.mean);
                boost::uintmax_t iters = 200;
                auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50),
                                                                iters);
                return 0.5 * (a + b);
            },
        },
        law_);
}

std::vector<double> Distribution::sample(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 gen(seed);
    std::vector<double> out(n);
    std::visit(overloaded{
                   [&](const law::Normal& d) {
                       std::normal_distribution<double> dist(d.mu, d.sigma);
                       for (auto& x : out) x = dist(gen);
                   },
                   [&](const law::Exponential& d) {
                       std::exponential_distribution<double> dist(d.rate);
                       for (auto& x : out) x = dist(gen);
                   },
                   [&](const law::Uniform& d) {
                       std::uniform_real_distribution<double> dist(d.lo, d.hi);
                       for (auto& x : out) x = dist(gen);
                   },
                   [&](const law::Empirical& d) {
                       std::discrete_distribution<std::size_t> dist(d.weights.begin(), d.weights.end());
                       for (auto& x : out) x = d.values[dist(gen)];
                   },
                   [&](const law::CustomPdf&) {
                       throw NumericError("Monte Carlo sampling is not available for a custom density");
                   },
               },
               law_);
    return out;
}

std::string Distribution::describe() const {
    return std::visit(overloaded{
                          [](const law::Normal& n) {
                              return "normal:mu=" + format_real(n.mu) + ",sigma=" + format_real(n.sigma);
                          },
                          [](const law::Exponential& e) { return "exp:rate=" + format_real(e.rate); },
                          [](const law::Uniform& u) {
                              return "uniform:lo=" + format_real(u.lo) + ",hi=" + format_real(u.hi);
                          },
                          [](const law::Empirical& e) { return "empirical:n=" + std::to_string(e.values.size()); },
                          [this](const law::CustomPdf&) { return "custom:support=" + support_.to_string(); },
                      },
                      law_);
}

double mean(const Distribution& d) { return d.mean(); }
double variance(const Distribution& d) { return d.variance(); }

double interval_prob(const Distribution& d, const SupportInterval& cell) {
    const auto& s = d.support();
    if (cell.upper() < s.lower() || cell.lower() > s.upper()) return 0.0;
    return std::visit(
        overloaded{
            [&](const law::Normal& n) {
                return std_normal_mass((cell.lower() - n.mu) / n.sigma, (cell.upper() - n.mu) / n.sigma);
            },
            [&](const law::Exponential& e) {
                double a = std::max(0.0, cell.lower());
                double b = cell.upper();
                if (!(b > a)) return 0.0;
                return std::exp(-e.rate * a) * -std::expm1(-e.rate * (b - a));
            },
            [&](const law::Uniform& u) {
                double a = std::max(u.lo, cell.lower());
                double b = std::min(u.hi, cell.upper());
                return b > a ? (b - a) / (u.hi - u.lo) : 0.0;
            },
            [&](const law::Empirical& e) {
                Accumulator acc;
                for (std::size_t i = 0; i < e.values.size(); ++i)
                    if (cell.contains(e.values[i])) acc.add(e.weights[i]);
                return std::min(1.0, acc.value());
            },
            [&](const law::CustomPdf& c) {
                if (cell.degenerate()) return 0.0;
                auto piece = s.intersect(cell);
                quad::Options opts;
                opts.max_subdivisions = c.quadrature_budget;
                opts.abs_tol = 1e-14;
                opts.rel_tol = 1e-11;
                auto r = quad::integrate(c.pdf, piece.lower(), piece.upper(), c.center, c.scale, opts);
                return std::clamp(r.value / c.normalizer, 0.0, 1.0);
            },
        },
        d.law());
}

TruncatedStats truncated_stats(const Distribution& d, const SupportInterval& cell) {
    const auto& s = d.support();
    if (cell.includes(s)) return {1.0, d.mean(), d.variance()};
    const double prob = interval_prob(d, cell);
    if (!(prob > 0)) throw EmptyCellError("cell " + cell.to_string() + " has zero probability");
    TruncatedStats out = std::visit(
        overloaded{
            [&](const law::Normal& n) {
                double alpha = (cell.lower() - n.mu) / n.sigma;
                double beta = (cell.upper() - n.mu) / n.sigma;
                if (beta - alpha < 0.1) {
                    // Narrow cell: the closed form cancels badly; integrate the
                    // standardized density instead.
                    auto st = integrate_stats(std_normal_pdf, alpha, beta, 0.5 * (alpha + beta), beta - alpha, 200);
                    return TruncatedStats{prob, n.mu + n.sigma * st.mean, n.sigma * n.sigma * st.variance};
                }
                double z = std_normal_mass(alpha, beta);
                double ratio = (std_normal_pdf(alpha) - std_normal_pdf(beta)) / z;
                double var = 1.0 + (z_pdf(alpha) - z_pdf(beta)) / z - ratio * ratio;
                return TruncatedStats{prob, n.mu + n.sigma * ratio, n.sigma * n.sigma * std::max(0.0, var)};
            },
            [&](const law::Exponential& e) {
                double a = std::max(0.0, cell.lower());
                double u = e.rate * (cell.upper() - a);
                return TruncatedStats{prob, a + trunc_exp_mean_factor(u) / e.rate,
                                      trunc_exp_var_factor(u) / (e.rate * e.rate)};
            },
            [&](const law::Uniform& u) {
                double a = std::max(u.lo, cell.lower());
                double b = std::min(u.hi, cell.upper());
                return TruncatedStats{prob, 0.5 * (a + b), (b - a) * (b - a) / 12};
            },
            [&](const law::Empirical& e) {
                Accumulator w, wx;
                for (std::size_t i = 0; i < e.values.size(); ++i)
                    if (cell.contains(e.values[i])) {
                        w.add(e.weights[i]);
                        wx.add(e.weights[i] * e.values[i]);
                    }
                double m = wx.value() / w.value();
                Accumulator wd;
                for (std::size_t i = 0; i < e.values.size(); ++i)
                    if (cell.contains(e.values[i])) {
                        double dev = e.values[i] - m;
                        wd.add(e.weights[i] * dev * dev);
                    }
                return TruncatedStats{prob, m, wd.value() / w.value()};
            },
            [&](const law::CustomPdf& c) {
                auto piece = s.intersect(cell);
                double sd = std::sqrt(c.variance);
                auto st = integrate_stats(c.pdf, piece.lower(), piece.upper(), std::clamp(c.mean, piece.lower(), piece.upper()),
                                          sd > 0 ? sd : c.scale, c.quadrature_budget);
                return TruncatedStats{prob, st.mean, st.variance};
            },
        },
        d.law());
    return out;
}

std::vector<double> equal_probability_cuts(const Distribution& d, int m) {
    if (m < 1) throw ParameterError("number of cells must be at least 1");
    std::vector<double> cuts;
    for (int k = 1; k < m; ++k) {
        double x = d.quantile(static_cast<double>(k) / m);
        if (d.is_discrete()) {
            if (x <= d.support().lower()) continue;
            if (!cuts.empty() && x <= cuts.back()) continue;
        }
        cuts.push_back(x);
    }
    return cuts;
}

Distribution transform_power(const Distribution& d, double r) {
    if (!(r != 0.0) || !std::isfinite(r)) throw ParameterError("power transform needs a finite nonzero exponent");
    const auto& s = d.support();
    if (s.lower() < 0 || (s.lower() == 0 && s.lower_closed()))
        throw DomainError("power transform needs a positive support, got " + s.to_string());
    if (r == 1.0) return d;
    if (const auto* e = std::get_if<law::Empirical>(&d.law())) {
        std::vector<double> ys(e->values.size());
        std::transform(e->values.begin(), e->values.end(), ys.begin(), [r](double x) { return std::pow(x, r); });
        return Distribution::discrete(std::move(ys), e->weights);
    }
    auto map = [r](double x) { return std::pow(x, r); };
    double a = map(s.lower()), b = map(s.upper());
    bool a_closed = s.lower_closed(), b_closed = s.upper_closed();
    if (r < 0) {
        std::swap(a, b);
        std::swap(a_closed, b_closed);
    }
    SupportInterval ys(a, b, a_closed, b_closed);
    const double inv = 1.0 / r;
    auto pdf = [d, inv](double y) {
        if (!(y > 0)) return 0.0;
        double x = std::pow(y, inv);
        return d.pdf(x) * std::abs(inv) * std::pow(y, inv - 1);
    };
    const double mu = d.mean();
    const double sd = std::sqrt(d.variance());
    double center = std::pow(mu, r);
    double scale = std::abs(r) * std::pow(mu, r - 1) * sd;
    int budget = 2000;
    if (const auto* c = std::get_if<law::CustomPdf>(&d.law())) budget = c->quadrature_budget;
    return Distribution::custom_pdf(pdf, ys, budget, std::clamp(center, a, b), scale);
}

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open sample file '" + path + "'");
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        std::string token = line.substr(first, last - first + 1);
        char* end = nullptr;
        double v = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size() || !std::isfinite(v))
            throw ParseError(path + ": line " + std::to_string(lineno) + ": not a finite number: '" + token + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace jsharp
