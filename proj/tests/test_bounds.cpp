#include <random>

#include "jensen_sharp/bounds.hpp"
#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/oracle.hpp"
#include "support.hpp"

using namespace jsharp;

namespace {

const double kSqrtE = std::exp(0.5);

FunctionSpec exp_half() { return make_catalog_function(catalog::ExpScaled{0.5}); }
FunctionSpec square() { return make_catalog_function(catalog::Quadratic{1.0, 0.0, 0.0}); }
FunctionSpec neglog() { return make_catalog_function(catalog::NegLog{}); }

double third_derivative(const FunctionSpec& f, double x) {
    const double step = 1e-4 * std::max(1.0, std::abs(x));
    return (f.deriv2(x + step) - f.deriv2(x - step)) / (2.0 * step);
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("h examples") {
    CHECK_NEAR(h_eval(exp_half(), 1.0, 0.0).value, 1.0 - 0.5 * kSqrtE, 1e-15);
    CHECK(h_eval(exp_half(), 1.0, 0.0).method == HMethod::Direct);
    for (double nu : {-3.0, 0.0, 2.5})
        for (double x : {-10.0, 0.1, 7.0}) CHECK_NEAR(h_eval(square(), nu, x).value, 1.0, 1e-12);
    auto at = h_eval(exp_half(), 1.0, 1.0);
    CHECK(at.method == HMethod::TaylorNearCenter);
    CHECK_NEAR(at.value, 0.125 * kSqrtE, 1e-15);
}

TEST_CASE("h refuses points outside the domain of phi") {
    CHECK_THROWS_AS(h_eval(neglog(), 1.0, -1.0), EvaluationError);
}

TEST_CASE("h is continuous at the switch radius") {
    for (const auto& kind : testing::catalog_grid()) {
        auto f = make_catalog_function(kind);
        CAPTURE(f.name);
        for (double nu : {0.3, 1.0, 4.0, 25.0}) {
            if (!f.natural_domain.contains(nu)) continue;
            const double r = h_switch_radius(nu);
            const double taylor = f.deriv2(nu) / 2.0;
            const double scale = std::max(1.0, std::abs(nu)) *
                                 (1.0 + std::abs(f.deriv2(nu)) + std::abs(third_derivative(f, nu)));
            for (double x : {nu - 1.0001 * r, nu + 1.0001 * r}) {
                auto v = h_eval(f, nu, x);
                CHECK(v.method == HMethod::Direct);
                CHECK_NEAR(v.value, taylor, 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("endpoint limits") {
    CHECK(h_endpoint_limit(exp_half(), 1.0, -kInf) == 0.0);
    CHECK(h_endpoint_limit(exp_half(), 1.0, kInf) == kInf);
    CHECK_NEAR(h_endpoint_limit(exp_half(), 1.0, 0.0), 1.0 - 0.5 * kSqrtE, 1e-12);
    CHECK(h_endpoint_limit(neglog(), 1.0, kInf) == 0.0);
    CHECK(h_endpoint_limit(neglog(), 1.0, 0.0) == kInf);
}

TEST_CASE("numeric limits without hints") {
    auto f = with_unknown_shape(neglog());
    f.h_limit_hint = nullptr;
    // h(x;1) = (-log x + x - 1)/(x-1)^2 -> 0 as x -> inf
    CHECK_NEAR(h_endpoint_limit(f, 1.0, kInf), 0.0, 1e-6);
    CHECK(h_endpoint_limit(f, 1.0, 0.0) == kInf);
    auto e = exp_half();
    e.h_limit_hint = nullptr;
    CHECK_NEAR(h_endpoint_limit(e, 1.0, -kInf), 0.0, 1e-6);
    CHECK(h_endpoint_limit(e, 1.0, kInf) == kInf);
}

TEST_CASE("approach_limit detects oscillation") {
    auto g = [](double x) { return std::sin(x); };
    CHECK_THROWS_AS(detail::approach_limit(g, 1.0, kInf), LimitUndeterminedError);
    CHECK_NEAR(detail::approach_limit([](double x) { return 2.0 + 1.0 / x; }, 1.0, kInf), 2.0, 1e-7);
}

TEST_CASE("extrema examples") {
    auto ex = h_extrema(exp_half(), SupportInterval::positive(), 1.0);
    CHECK_NEAR(ex.inf.value, 0.1756, 1e-4);
    CHECK(ex.inf.at == 0.0);
    CHECK(ex.sup.value == kInf);
    auto q = h_extrema(square(), SupportInterval::open(-3, 8), 0.5);
    CHECK_NEAR(q.inf.value, 1.0, 1e-12);
    CHECK_NEAR(q.sup.value, 1.0, 1e-12);
    // frozen from a 40-digit evaluation of h(x; 54.83) for phi = 1/x
    auto p = h_extrema(make_catalog_function(catalog::Power{-1.0}), SupportInterval::closed(10, 100), 54.83);
    CHECK(p.inf.at == 100.0);
    CHECK(p.sup.at == 10.0);
    CHECK_NEAR(p.inf.value, 3.3263160261673300e-06, 1e-18);
    CHECK_NEAR(p.sup.value, 3.3263160261673301e-05, 1e-17);
}

TEST_CASE("dense scan confirms the decreasing pattern for 1/x") {
    auto f = make_catalog_function(catalog::Power{-1.0});
    double prev = kInf;
    for (int i = 0; i <= 2000; ++i) {
        double x = 10.0 + 90.0 * i / 2000.0;
        double v = h_eval(f, 54.83, x).value;
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("extrema preconditions") {
    CHECK_THROWS_AS(h_extrema(neglog(), SupportInterval::open(-1, 1), 0.5), DomainError);
    CHECK_THROWS_AS(h_extrema(exp_half(), SupportInterval::open(0, 1), 2.0), DomainError);
}

TEST_CASE("global scan agrees with the fast path") {
    for (const auto& kind : testing::catalog_grid()) {
        auto f = make_catalog_function(kind);
        auto g = with_unknown_shape(f);
        CAPTURE(f.name);
        auto dom = f.natural_domain.lower_finite() ? SupportInterval::open(0.5, 6.0) : SupportInterval::open(-2.0, 3.0);
        auto fast = h_extrema(f, dom, 1.3);
        auto scan = h_extrema(g, dom, 1.3);
        const double scale = std::max({1.0, std::abs(fast.inf.value), std::abs(fast.sup.value)});
        CHECK_NEAR(fast.inf.value, scan.inf.value, 1e-8 * scale);
        CHECK_NEAR(fast.sup.value, scan.sup.value, 1e-8 * scale);
    }
}

TEST_CASE("scan finds an interior extremum") {
    // phi' = sin has no fixed shape; h has interior critical points.
    // The dense grid suffers cancellation near x = 0, hence the loose tolerance.
    auto f = make_custom_function(
        "sin", [](double x) { return -std::cos(x); }, [](double x) { return std::sin(x); },
        [](double x) { return std::cos(x); }, SupportInterval::real_line());
    auto ex = h_extrema(f, SupportInterval::closed(-6, 6), 0.0);
    double lo = kInf, hi = -kInf;
    for (int i = 0; i <= 200000; ++i) {
        double x = -6.0 + 12.0 * i / 200000.0;
        double v = h_eval(f, 0.0, x).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK_NEAR(ex.inf.value, lo, 1e-7);
    CHECK_NEAR(ex.sup.value, hi, 1e-7);
    CHECK_NEAR(ex.sup.value, 0.5, 1e-8);
}

TEST_CASE("theorem 1 examples") {
    auto b = jensen_bounds(exp_half(), Distribution::exponential(1.0));
    CHECK_NEAR(b.lower, 0.1756, 1e-4);
    CHECK(b.upper == kInf);
    const double gap = 2.0 - kSqrtE;
    CHECK(b.lower <= gap);
    auto q = jensen_bounds(square(), Distribution::normal(0, 1));
    CHECK_NEAR(q.lower, 1.0, 1e-12);
    CHECK_NEAR(q.upper, 1.0, 1e-12);
}

TEST_CASE("neglog on Uniform(10,100) brackets the quadrature gap") {
    auto b = jensen_bounds(neglog(), Distribution::uniform(10, 100));
    // log(55) - E log X, closed form evaluated to 40 digits
    const double gap = 0.14632021113393003;
    CHECK(b.lower <= gap);
    CHECK(gap <= b.upper);
    auto est = estimate_gap(neglog(), Distribution::uniform(10, 100));
    CHECK_NEAR(est.value, gap, 1e-10);
}

TEST_CASE("corollary 1 examples") {
    auto q = sample_bounds(square(), {1.0, 2.0, 3.0});
    CHECK_NEAR(q.lower, 2.0 / 3.0, 1e-15);
    CHECK_NEAR(q.upper, 2.0 / 3.0, 1e-15);
    auto c = sample_bounds(neglog(), {5.0, 5.0, 5.0});
    CHECK(c.lower == 0.0);
    CHECK(c.upper == 0.0);
    CHECK_THROWS_AS(sample_bounds(neglog(), {1.0}), ParameterError);
    CHECK_THROWS_AS(sample_bounds(neglog(), {1.0, -2.0}), DomainError);
}

TEST_CASE("corollary 1 brackets the arithmetic-geometric ratio") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(10.0, 100.0);
    std::vector<double> xs(100);
    for (auto& x : xs) x = u(rng);
    double am = 0.0, lg = 0.0;
    for (double x : xs) {
        am += x;
        lg += std::log(x);
    }
    am /= 100.0;
    lg /= 100.0;
    const double log_ratio = std::log(am) - lg;
    auto b = sample_bounds(neglog(), xs);
    CHECK(b.lower <= log_ratio);
    CHECK(log_ratio <= b.upper);
    CHECK(b.lower_detail.at == *std::max_element(xs.begin(), xs.end()));
    CHECK(b.upper_detail.at == *std::min_element(xs.begin(), xs.end()));
}

TEST_CASE("curvature bounds") {
    auto c = curvature_bounds(exp_half(), Distribution::exponential(1.0));
    CHECK_NEAR(c.lower, 0.125, 1e-12);
    auto q = curvature_bounds(square(), Distribution::uniform(-1, 4));
    auto j = jensen_bounds(square(), Distribution::uniform(-1, 4));
    CHECK_NEAR(q.lower, j.lower, 1e-12);
    CHECK_NEAR(q.upper, j.upper, 1e-12);
}

TEST_CASE("curvature bounds are never tighter") {
    std::vector<Distribution> laws{Distribution::normal(0.5, 1.0), Distribution::exponential(2.0),
                                   Distribution::uniform(0.5, 3.0), Distribution::uniform(-2.0, 1.0)};
    for (const auto& kind : testing::catalog_grid()) {
        auto f = make_catalog_function(kind);
        for (const auto& d : laws) {
            if (!f.natural_domain.includes(d.support())) continue;
            CAPTURE(f.name);
            CAPTURE(d.describe());
            auto j = jensen_bounds(f, d);
            auto c = curvature_bounds(f, d);
            CHECK(c.lower <= j.lower + 1e-10 * std::max(1.0, std::abs(j.lower)));
            if (std::isinf(j.upper))
                CHECK(c.upper == kInf);
            else
                CHECK(c.upper >= j.upper - 1e-10 * std::max(1.0, std::abs(j.upper)));
        }
    }
}

TEST_CASE("linear phi gives zero bounds") {
    auto lin = make_catalog_function(catalog::Quadratic{0.0, 2.0, -1.0});
    auto b = jensen_bounds(lin, Distribution::normal(1, 3));
    CHECK(b.lower == 0.0);
    CHECK(b.upper == 0.0);
}

TEST_CASE("power mean bracket") {
    std::vector<double> xs{12.0, 20.0, 33.0, 47.0, 61.0, 88.0, 95.0};
    auto d = Distribution::empirical(xs);
    auto pm = power_mean_bounds(d, 1.0, -1.0);
    double inv = 0.0;
    for (double x : xs) inv += 1.0 / x;
    const double hm = xs.size() / inv;
    CHECK(pm.mean_lower <= hm);
    CHECK(hm <= pm.mean_upper);
    CHECK(pm.mean_upper < d.mean());

    auto same = power_mean_bounds(d, 2.0, 2.0);
    CHECK(same.moment_lower == same.moment_upper);
    auto sq = power_mean_bounds(d, 1.0, 2.0);
    CHECK_NEAR(sq.moment_lower, d.mean() * d.mean() + d.variance(), 1e-9);
    CHECK_NEAR(sq.moment_upper, d.mean() * d.mean() + d.variance(), 1e-9);
    CHECK_THROWS_AS(power_mean_bounds(d, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(power_mean_bounds(Distribution::normal(0, 1), 1.0, -1.0), DomainError);
}

TEST_CASE("generalized mean paths agree") {
    std::vector<double> xs{12.0, 20.0, 33.0, 47.0, 61.0, 88.0, 95.0};
    auto d = Distribution::empirical(xs);
    auto g = generalized_mean_bounds(neglog(), [](double y) { return std::exp(-y); }, d);
    auto s = sample_bounds(neglog(), xs);
    // geometric-mean bracket is AM * exp(-gap bracket)
    CHECK_NEAR(g.lower, d.mean() * std::exp(-s.upper), 1e-10 * d.mean());
    CHECK_NEAR(g.upper, d.mean() * std::exp(-s.lower), 1e-10 * d.mean());

    auto lin = generalized_mean_bounds(make_catalog_function(catalog::Quadratic{0.0, 1.0, 0.0}),
                                       [](double y) { return y; }, d);
    CHECK(lin.lower == lin.upper);
    CHECK_NEAR(lin.lower, d.mean(), 1e-12);

    auto pw = generalized_mean_bounds(make_catalog_function(catalog::Power{-1.0}),
                                      [](double y) { return 1.0 / y; }, d);
    auto pm = power_mean_bounds(d, 1.0, -1.0);
    CHECK_NEAR(pw.lower, pm.mean_lower, 1e-10 * pm.mean_lower);
    CHECK_NEAR(pw.upper, pm.mean_upper, 1e-10 * pm.mean_upper);
}

TEST_CASE("bounds are never NaN") {
    std::vector<Distribution> laws{Distribution::normal(0, 1), Distribution::exponential(1.0),
                                   Distribution::uniform(0.1, 5.0)};
    for (const auto& kind : testing::catalog_grid()) {
        auto f = make_catalog_function(kind);
        for (const auto& d : laws) {
            if (!f.natural_domain.includes(d.support())) continue;
            auto b = jensen_bounds(f, d);
            CHECK_FALSE(std::isnan(b.lower));
            CHECK_FALSE(std::isnan(b.upper));
            CHECK(b.lower <= b.upper);
        }
    }
}

}
