#pragma once

#include "core/coefficients.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace linproc {

// Second-order structure of S_n for a unit-norm martingale-difference
// innovation. Vectors are indexed by n directly; entry 0 is unused (zero).
struct VarianceProfile {
    std::vector<double> b;                 // b_0..b_{n_max}
    std::vector<double> sigma_bar_sq;      // sum_{k=1}^{n-1} b_{n-k}^2
    std::vector<double> cond_exp_norm_sq;  // ||E(S_n | F_0)||_2^2
    std::vector<double> sigma_sq;          // ||S_n||_2^2
    std::size_t past_window = 0;

    std::size_t n_max() const noexcept { return sigma_sq.empty() ? 0 : sigma_sq.size() - 1; }
    double sigma(std::size_t n) const { return std::sqrt(sigma_sq.at(n)); }
    double sigma_bar(std::size_t n) const { return std::sqrt(sigma_bar_sq.at(n)); }
    double cond_exp_norm(std::size_t n) const { return std::sqrt(cond_exp_norm_sq.at(n)); }
};

/// Exact when a has exact support and past_window >= L: the k <= 0 part of
/// the decomposition only involves b_{n+m} - b_m for m <= L.
VarianceProfile variance_profile(const CoefficientSeq& a, std::size_t n_max, std::size_t past_window);

/// Convenience overload with past_window = L.
VarianceProfile variance_profile(const CoefficientSeq& a, std::size_t n_max);

} // namespace linproc
