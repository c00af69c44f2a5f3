// Acceptance gate: one PASS/FAIL line per criterion, detail lines indented.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "jensen_sharp/bounds.hpp"
#include "jensen_sharp/distributions.hpp"
#include "jensen_sharp/errors.hpp"
#include "jensen_sharp/oracle.hpp"
#include "jensen_sharp/partition.hpp"
#include "jensen_sharp/report.hpp"

#ifndef JENSEN_SHARP_DATA_DIR
#define JENSEN_SHARP_DATA_DIR "data"
#endif

using namespace jsharp;

namespace {

class Criterion {
public:
    explicit Criterion(std::string title) : title_(std::move(title)), start_(std::chrono::steady_clock::now()) {}

    void near(const std::string& what, double got, double want, double tol) {
        const bool same_inf = std::isinf(want) && got == want;
        const double delta = same_inf ? 0.0 : std::abs(got - want);
        record(what + ": " + format_real(got) + " vs " + format_real(want) + ", |d| = " + format_real(delta) +
                   ", tol " + format_real(tol),
               same_inf || delta <= tol);
    }

    void check(const std::string& what, bool ok) { record(what, ok); }

    void failures_only(const std::string& what, long cases, long failed) {
        record(what + ": " + std::to_string(cases - failed) + "/" + std::to_string(cases) + " cases", failed == 0);
    }

    bool finish(double time_limit_s) {
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        record("runtime " + format_real(std::round(elapsed * 1e3) / 1e3) + " s < " + format_real(time_limit_s) + " s",
               elapsed < time_limit_s);
        std::printf("%s  %s\n", ok_ ? "PASS" : "FAIL", title_.c_str());
        for (const auto& line : lines_) std::printf("        %s\n", line.c_str());
        std::fflush(stdout);
        return ok_;
    }

private:
    void record(const std::string& line, bool ok) {
        lines_.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
        ok_ = ok_ && ok;
    }

    std::string title_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> lines_;
    bool ok_ = true;
};

bool inside(double value, double err, double lower, double upper) {
    GapBounds b;
    b.lower = lower;
    b.upper = upper;
    GapEstimate e;
    e.value = value;
    e.error_bound = err;
    return report::brackets(b, e);
}

bool criterion_mgf() {
    Criterion c("1. exp(x/2) under Exponential(1): Theorem 1 and curvature bounds, oracle gap");
    auto f = make_catalog_function(catalog::ExpScaled{0.5});
    auto d = Distribution::exponential(1.0);
    auto b = jensen_bounds(f, d);
    auto cb = curvature_bounds(f, d);
    auto g = estimate_gap(f, d);
    c.near("lower = 1 - e^0.5/2", b.lower, 1.0 - 0.5 * std::exp(0.5), 1e-12);
    c.near("lower vs reference 0.176", b.lower, 0.176, 5e-4);
    c.near("upper", b.upper, kInf, 0.0);
    c.near("curvature lower", cb.lower, 0.125, 1e-9);
    c.near("oracle gap = 2 - sqrt(e)", g.value, 2.0 - std::exp(0.5), 1e-8);
    c.check("oracle gap inside [lower, upper]", report::brackets(b, g));
    return c.finish(1.0);
}

bool criterion_tertiles() {
    Criterion c("2. e^x under Normal(0,1), three equal-probability cells");
    auto f = make_catalog_function(catalog::ExpScaled{1.0});
    auto d = Distribution::normal(0.0, 1.0);
    auto cuts = equal_probability_cuts(d, 3);
    auto plan = build_partition(d, cuts);
    auto pb = partition_bounds(f, plan);
    c.near("cut 1", cuts.at(0), -0.431, 1e-3);
    c.near("cut 2", cuts.at(1), 0.431, 1e-3);
    const double means[] = {-1.091, 0.000, 1.091};
    const double vars[] = {0.280, 0.060, 0.280};
    const double infs[] = {0.000, 0.435, 1.209};
    const double sups[] = {0.212, 0.580, kInf};
    for (int j = 0; j < 3; ++j) {
        const std::string cell = "cell " + std::to_string(j + 1) + " ";
        c.near(cell + "mean", plan.cells[j].stats.mean, means[j], 1e-3);
        c.near(cell + "variance", plan.cells[j].stats.variance, vars[j], 1e-3);
        c.near(cell + "inf h", pb.cells[j].h.inf.value, infs[j], 2e-3);
        c.near(cell + "sup h", pb.cells[j].h.sup.value, sups[j], 2e-3);
    }
    c.near("partition lower bound", pb.bounds.lower, 0.409, 2e-3);
    c.near("partition upper bound", pb.bounds.upper, kInf, 0.0);
    c.near("oracle gap", estimate_gap(f, d).value, 0.6487, 5e-4);
    return c.finish(5.0);
}

bool criterion_sample_means() {
    Criterion c("3. arithmetic/geometric/harmonic means on the seeded Uniform(10,100) sample");
    auto xs = read_samples(std::string(JENSEN_SHARP_DATA_DIR) + "/uniform_10_100_seed42.txt");
    auto d = Distribution::empirical(xs);
    auto f = make_catalog_function(catalog::NegLog{});
    double log_sum = 0.0, inv_sum = 0.0;
    for (double x : xs) {
        log_sum += std::log(x);
        inv_sum += 1.0 / x;
    }
    const double n = static_cast<double>(xs.size());
    const double am = d.mean(), gm = std::exp(log_sum / n), hm = n / inv_sum;
    const double ratio = am / gm;
    auto sb = sample_bounds(f, xs);
    auto cb = curvature_bounds(f, d);
    const double lo = std::exp(sb.lower), hi = std::exp(sb.upper);
    c.check("n = 100", xs.size() == 100);
    c.check("AM/GM bracket " + format_real(lo) + " <= " + format_real(ratio) + " <= " + format_real(hi),
            lo <= ratio && ratio <= hi);
    c.check("curvature lower " + format_real(std::exp(cb.lower)) + " < " + format_real(lo), std::exp(cb.lower) < lo);
    c.check("curvature upper " + format_real(std::exp(cb.upper)) + " > " + format_real(hi), std::exp(cb.upper) > hi);
    auto pm = power_mean_bounds(d, 1.0, -1.0);
    c.check("harmonic bracket " + format_real(pm.mean_lower) + " <= " + format_real(hm) + " <= " +
                format_real(pm.mean_upper),
            pm.mean_lower <= hm && hm <= pm.mean_upper);
    c.check("harmonic upper " + format_real(pm.mean_upper) + " < AM " + format_real(am), pm.mean_upper < am);
    return c.finish(1.0);
}

struct Case {
    std::string label;
    FunctionSpec f;
    Distribution d;
};

Distribution random_law(int kind, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (kind) {
        case 0: return Distribution::normal(-2.0 + 4.0 * u(rng), 0.2 + 1.8 * u(rng));
        case 1: return Distribution::exponential(0.5 + 2.5 * u(rng));
        case 2: {
            double lo = 0.1 + 4.9 * u(rng);
            return Distribution::uniform(lo, lo + 0.5 + 9.5 * u(rng));
        }
        default: {
            std::lognormal_distribution<double> ln(std::log(1.0 + 5.0 * u(rng)), 0.1 + 0.6 * u(rng));
            std::vector<double> xs(20 + rng() % 80);
            for (auto& x : xs) x = ln(rng);
            return Distribution::empirical(std::move(xs));
        }
    }
}

CatalogKind random_function(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto pick = rng() % 10;
    switch (pick < 3 ? 0 : pick < 6 ? 1 : pick < 7 ? 2 : pick < 9 ? 3 : 4) {
        case 0: {
            double t = (0.2 + 1.3 * u(rng)) * (rng() % 2 ? 1.0 : -1.0);
            return catalog::ExpScaled{t};
        }
        case 1: {
            static const double ps[] = {-2.0, -1.0, -0.5, 0.5, 1.5, 2.0, 2.5, 3.0};
            return catalog::Power{ps[rng() % 8]};
        }
        case 2: return catalog::NegLog{};
        case 3: return catalog::Quadratic{0.1 + 2.0 * u(rng), -1.0 + 2.0 * u(rng), u(rng)};
        default: return catalog::Quadratic{0.0, -2.0 + 4.0 * u(rng), u(rng)};
    }
}

bool criterion_properties() {
    Criterion c("4. randomized property suite (bracketing, quadratic and linear sharpness, m = 1 reduction)");
    std::mt19937_64 rng(20240501);
    long cases = 0, bracket_fail = 0, quad_fail = 0, linear_fail = 0, reduce_fail = 0, errors = 0;
    long quad_cases = 0, linear_cases = 0, bracket_checks = 0;
    std::vector<std::string> notes;
    int per_law[4] = {0, 0, 0, 0};
    while (cases < 300) {
        const int law_kind = static_cast<int>(cases % 4);
        auto kind = random_function(rng);
        // every third case forces the global-scan path
        auto f = cases % 3 == 2 ? with_unknown_shape(make_catalog_function(kind)) : make_catalog_function(kind);
        auto d = random_law(law_kind, rng);
        if (!f.natural_domain.includes(d.support())) continue;
        ++cases;
        ++per_law[law_kind];
        const std::string label = f.name + " / " + d.describe();
        try {
            auto gap = estimate_gap(f, d);
            std::vector<std::pair<std::string, GapBounds>> all{{"theorem1", jensen_bounds(f, d)},
                                                               {"curvature", curvature_bounds(f, d)}};
            if (const auto* e = std::get_if<law::Empirical>(&d.law())) all.emplace_back("sample", sample_bounds(f, e->values));
            for (int m : {1, 2, 3, 5}) {
                auto pb = partition_bounds(f, build_partition(d, equal_probability_cuts(d, m)));
                all.emplace_back("partition m=" + std::to_string(m), pb.bounds);
                if (m == 1) {
                    const auto& t = all.front().second;
                    bool same_lower = std::abs(pb.bounds.lower - t.lower) <= 1e-12 * std::max(1.0, std::abs(t.lower));
                    bool same_upper = pb.bounds.upper == t.upper ||
                                      std::abs(pb.bounds.upper - t.upper) <= 1e-12 * std::max(1.0, std::abs(t.upper));
                    if (!(same_lower && same_upper)) {
                        ++reduce_fail;
                        notes.push_back("m=1 reduction: " + label);
                    }
                }
            }
            for (const auto& [name, b] : all) {
                ++bracket_checks;
                if (!inside(gap.value, gap.error_bound, b.lower, b.upper)) {
                    ++bracket_fail;
                    notes.push_back(name + " misses gap " + format_real(gap.value) + " [" + format_real(b.lower) +
                                    ", " + format_real(b.upper) + "]: " + label);
                }
            }
            if (const auto* q = std::get_if<catalog::Quadratic>(&kind)) {
                const auto& t = all.front().second;
                const double expect = q->c2 * d.variance();
                if (q->c2 != 0.0) {
                    ++quad_cases;
                    const double tol = 1e-10 * std::max(1.0, std::abs(expect));
                    if (!(std::abs(t.lower - expect) <= tol && std::abs(t.upper - expect) <= tol &&
                          std::abs(gap.value - expect) <= std::max(tol, 3.0 * gap.error_bound))) {
                        ++quad_fail;
                        notes.push_back("quadratic sharpness: " + label);
                    }
                } else {
                    ++linear_cases;
                    if (!(t.lower == 0.0 && t.upper == 0.0)) {
                        ++linear_fail;
                        notes.push_back("linear: " + label);
                    }
                }
            }
        } catch (const std::exception& e) {
            ++errors;
            notes.push_back(std::string("error: ") + e.what() + ": " + label);
        }
    }
    c.check("cases per law normal/exponential/uniform/empirical = " + std::to_string(per_law[0]) + "/" +
                std::to_string(per_law[1]) + "/" + std::to_string(per_law[2]) + "/" + std::to_string(per_law[3]),
            cases >= 200);
    c.failures_only("bracketing checks", bracket_checks, bracket_fail);
    c.failures_only("quadratic sharpness", quad_cases, quad_fail);
    c.failures_only("linear phi gives zero bounds", linear_cases, linear_fail);
    c.failures_only("m = 1 partition equals Theorem 1", cases, reduce_fail);
    c.failures_only("cases without numeric errors", cases, errors);
    for (std::size_t i = 0; i < notes.size() && i < 10; ++i) c.check(notes[i], false);
    return c.finish(60.0);
}

bool criterion_monotone_h() {
    Criterion c("5. monotone h for shape-tagged functions; fast path equals global scan");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CatalogKind> kinds;
    for (double t : {-1.0, -0.5, 0.5, 1.0, 2.0}) kinds.emplace_back(catalog::ExpScaled{t});
    for (double p : {-2.0, -1.0, 0.5, 1.0, 1.5, 2.0, 3.0}) kinds.emplace_back(catalog::Power{p});
    kinds.emplace_back(catalog::NegLog{});
    kinds.emplace_back(catalog::Quadratic{1.0, 0.0, 0.0});
    long configs = 0, monotone_fail = 0, match_fail = 0, errors = 0;
    std::vector<std::string> notes;
    for (const auto& kind : kinds) {
        auto f = make_catalog_function(kind);
        auto scan = with_unknown_shape(f);
        const bool positive = f.natural_domain.lower_finite();
        for (int k = 0; k < 50; ++k) {
            ++configs;
            double a = positive ? 0.05 + 5.0 * u(rng) : -6.0 + 8.0 * u(rng);
            double b = a + 0.1 + 8.0 * u(rng);
            const bool unbounded = k % 5 == 4;
            SupportInterval interval =
                unbounded ? SupportInterval(a, kInf, true, false) : SupportInterval::closed(a, b);
            const double nu = a + (b - a) * (0.05 + 0.9 * u(rng));
            const std::string label = f.name + " on " + interval.to_string() + ", nu = " + format_real(nu);
            try {
                std::vector<double> hs(1000);
                double scale = 1.0;
                for (int i = 0; i < 1000; ++i) {
                    hs[i] = h_eval(f, nu, a + (b - a) * i / 999.0).value;
                    scale = std::max(scale, std::abs(hs[i]));
                }
                const double dir = f.phi_prime_shape == PhiPrimeShape::Convex ? 1.0 : -1.0;
                for (int i = 1; i < 1000; ++i) {
                    if (dir * (hs[i] - hs[i - 1]) < -1e-10 * scale) {
                        ++monotone_fail;
                        notes.push_back("not monotone: " + label);
                        break;
                    }
                }
                auto fast = h_extrema(f, interval, nu);
                auto slow = h_extrema(scan, interval, nu);
                auto same = [&](double x, double y) {
                    if (std::isinf(x) || std::isinf(y)) return x == y;
                    return std::abs(x - y) <= 1e-8 * std::max({1.0, std::abs(x), std::abs(y)});
                };
                if (!same(fast.inf.value, slow.inf.value) || !same(fast.sup.value, slow.sup.value)) {
                    ++match_fail;
                    notes.push_back("fast " + format_real(fast.inf.value) + ".." + format_real(fast.sup.value) +
                                    " vs scan " + format_real(slow.inf.value) + ".." + format_real(slow.sup.value) +
                                    ": " + label);
                }
            } catch (const std::exception& e) {
                ++errors;
                notes.push_back(std::string("error: ") + e.what() + ": " + label);
            }
        }
    }
    c.failures_only("monotone on a 1000-point grid", configs, monotone_fail);
    c.failures_only("fast path matches global scan", configs, match_fail);
    c.failures_only("configurations without numeric errors", configs, errors);
    for (std::size_t i = 0; i < notes.size() && i < 10; ++i) c.check(notes[i], false);
    return c.finish(60.0);
}

}  // namespace

int main() {
    const std::vector<std::function<bool()>> criteria{criterion_mgf, criterion_tertiles, criterion_sample_means,
                                                      criterion_properties, criterion_monotone_h};
    int failed = 0;
    for (const auto& run : criteria) {
        try {
            if (!run()) ++failed;
        } catch (const std::exception& e) {
            std::printf("FAIL  criterion aborted: %s\n", e.what());
            ++failed;
        }
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
