#include "core/stats.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace linproc {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_statistic_sorted(std::span<const double> sorted) {
    require(!sorted.empty(), "KS statistic of an empty sample");
    const double m = static_cast<double>(sorted.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double phi = normal_cdf(sorted[i]);
        const double below = static_cast<double>(i) / m;      // F just left of the value
        const double at = static_cast<double>(j + 1) / m;     // F at the value
        d = std::max({d, phi - below, at - phi});
        i = j + 1;
    }
    return d;
}

double ks_statistic(std::span<const double> sample) {
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    return ks_statistic_sorted(sorted);
}

double exceedance(std::span<const double> sample, double threshold) {
    require(!sample.empty(), "exceedance of an empty sample");
    std::size_t hits = 0;
    for (double x : sample) hits += std::fabs(x) >= threshold;
    return static_cast<double>(hits) / static_cast<double>(sample.size());
}

double binomial_se(double p, std::size_t m) {
    require(m > 0, "binomial standard error needs m > 0");
    return std::sqrt(p * (1.0 - p) / static_cast<double>(m));
}

void OnlineMoments::add(double x) noexcept {
    const std::uint64_t n1 = n_;
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double term = delta * delta_n * static_cast<double>(n1);
    mean_ += delta_n;
    m3_ += term * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term;
}

void OnlineMoments::merge(const OnlineMoments& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double delta = o.mean_ - mean_;
    const double m2 = m2_ + o.m2_ + delta * delta * na * nb / n;
    const double m3 = m3_ + o.m3_ + delta * delta * delta * na * nb * (na - nb) / (n * n) +
                      3.0 * delta * (na * o.m2_ - nb * m2_) / n;
    mean_ += delta * nb / n;
    m2_ = m2;
    m3_ = m3;
    n_ += o.n_;
}

double OnlineMoments::variance() const noexcept {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double OnlineMoments::skewness() const noexcept {
    if (n_ < 3 || m2_ <= 0.0) return 0.0;
    const double n = static_cast<double>(n_);
    return std::sqrt(n) * m3_ / std::pow(m2_, 1.5);
}

double OnlineMoments::standard_error() const noexcept {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

double median(std::vector<double> values) {
    require(!values.empty(), "median of an empty list");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    return m % 2 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), "log_log_slope needs equal lengths");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    if (lx.size() < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

} // namespace linproc
