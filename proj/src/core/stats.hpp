#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace linproc {

/// Standard normal distribution function.
double normal_cdf(double x);

/// Two-sided Kolmogorov-Smirnov distance between the empirical law of
/// `sample` and the standard normal. Ties are handled by evaluating the
/// empirical distribution at both sides of each distinct value.
double ks_statistic(std::span<const double> sample);

/// Same statistic on an already sorted sample.
double ks_statistic_sorted(std::span<const double> sorted);

/// Fraction of |x| >= threshold.
double exceedance(std::span<const double> sample, double threshold);

/// Binomial standard error sqrt(p (1 - p) / m).
double binomial_se(double p, std::size_t m);

// Running mean and central moments (Welford/Chan). merge() is associative,
// and commutative up to rounding, so callers that need bitwise
// reproducibility merge in a fixed order.
class OnlineMoments {
public:
    void add(double x) noexcept;
    void merge(const OnlineMoments& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance.
    double variance() const noexcept;
    double skewness() const noexcept;
    /// Standard error of the mean.
    double standard_error() const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
};

double median(std::vector<double> values);

/// Least squares slope of log(y) on log(x); pairs with nonpositive entries are skipped.
double log_log_slope(std::span<const double> x, std::span<const double> y);

} // namespace linproc
