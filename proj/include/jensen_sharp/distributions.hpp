#pragma once

#include <functional>
#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "jensen_sharp/interval.hpp"

namespace jsharp {

namespace law {
struct Normal {
    double mu, sigma;
};
struct Exponential {
    double rate;
};
struct Uniform {
    double lo, hi;
};
/// Finite discrete law. Values are kept sorted; weights sum to one. A sample
/// of n points has weights 1/n.
struct Empirical {
    std::vector<double> values;
    std::vector<double> weights;
};
/// Density known up to normalization, with cached moments.
struct CustomPdf {
    std::function<double(double)> pdf;  // unnormalized
    SupportInterval support;
    int quadrature_budget = 2000;
    double center = 0.0;  // where the mass sits, for the quadrature core
    double scale = 1.0;
    double normalizer = 1.0;
    double mean = 0.0;
    double variance = 0.0;
};
}  // namespace law

using Law = std::variant<law::Normal, law::Exponential, law::Uniform, law::Empirical, law::CustomPdf>;

/// Moments of X conditioned on a cell.
struct TruncatedStats {
    double prob = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

/// A law of X. Immutable; all queries are pure.
class Distribution {
public:
    static Distribution normal(double mu, double sigma);
    static Distribution exponential(double rate);
    static Distribution uniform(double lo, double hi);
    /// Equal-weight sample; needs at least 2 finite values.
    static Distribution empirical(std::vector<double> samples);
    /// Weighted point masses; at least one atom, weights nonnegative.
    static Distribution discrete(std::vector<double> values, std::vector<double> weights);
    /// Normalizes `pdf` over `support` by quadrature and caches mean and variance.
    /// `center`/`scale` locate the mass for the quadrature core on unbounded supports.
    static Distribution custom_pdf(std::function<double(double)> pdf, SupportInterval support,
                                   int quadrature_budget = 2000, double center = 0.0, double scale = 1.0);

    const Law& law() const { return law_; }
    const SupportInterval& support() const { return support_; }
    bool is_discrete() const { return std::holds_alternative<law::Empirical>(law_); }

    double mean() const;
    double variance() const;
    /// Density (continuous laws only); 0 outside the support.
    double pdf(double x) const;
    /// P(X <= x).
    double cdf(double x) const;
    /// Smallest x with cdf(x) >= p; nearest rank for discrete laws.
    double quantile(double p) const;

    /// Draws n values with a generator seeded by `seed`.
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    std::string describe() const;

private:
    Distribution(Law law, SupportInterval support) : law_(std::move(law)), support_(support) {}
    Law law_;
    SupportInterval support_;
};

double mean(const Distribution& d);
double variance(const Distribution& d);

/// P(X in cell). Discrete laws honor the cell's open/closed flags.
double interval_prob(const Distribution& d, const SupportInterval& cell);

/// Probability, mean and variance of X given X in cell. Throws EmptyCellError
/// when the cell has zero probability.
TruncatedStats truncated_stats(const Distribution& d, const SupportInterval& cell);

/// Interior cut points x_1 < ... < x_{m-1} splitting the support into m cells
/// of equal probability (nearest rank for discrete laws, with duplicate and
/// support-edge cuts dropped).
std::vector<double> equal_probability_cuts(const Distribution& d, int m);

/// Law of Y = X^r for X with positive support.
Distribution transform_power(const Distribution& d, double r);

/// Reads one number per line; blank lines and '#' comments are skipped.
std::vector<double> read_samples(const std::string& path);

}  // namespace jsharp
