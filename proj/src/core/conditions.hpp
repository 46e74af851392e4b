#pragma once

#include "core/coefficients.hpp"
#include "core/counterexample.hpp"
#include "core/extended_real.hpp"
#include "core/variance.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace linproc {

struct Condition2Result {
    ExtendedReal c;          // max over 2 <= n <= n_max, 1 <= k <= n of n b_k^2 / sigma_bar_n^2
    std::size_t n = 0;       // witness, smallest n then smallest k on ties
    std::size_t k = 0;
    std::size_t n_max = 0;
    double log_slope = 0.0;  // slope of log max_k(n b_k^2 / sigma_bar_n^2) against log n
    bool bounded = false;    // heuristic: slope below the divergence cutoff
};

/// Slopes above this are read as "grows like a power of n".
inline constexpr double condition2_slope_cutoff = 0.25;

/// Throws Error(degenerate) when every b_k (k <= n_max) vanishes.
Condition2Result check_condition2(const VarianceProfile& profile, std::size_t n_max);

struct HannanSum {
    double value = 0.0;
    bool lower_bound = false;  // true when the coefficient tail is only bounded in l2
};
HannanSum hannan_sum(const CoefficientSeq& a);

struct MaxwellWoodroofe {
    double partial = 0.0;
    ExtendedReal tail_bound;  // certified bound on sum_{n > n_max}; unknown without a construction
};

MaxwellWoodroofe maxwell_woodroofe_sum(const VarianceProfile& profile, std::size_t n_max);
/// Tail bound from the per-block estimates of the counterexample construction.
MaxwellWoodroofe maxwell_woodroofe_sum(const VarianceProfile& profile, std::size_t n_max,
                                       const CounterexampleSpec& spec);

/// Direct checks of the two sufficient hypotheses "b_k bounded" and
/// "liminf sigma_bar_n^2 / n > 0" over a finite range.
struct BoundedGrowthCheck {
    double sup_abs_b = 0.0;
    double min_ratio = 0.0;  // min of sigma_bar_n^2 / n over the upper half of the range
    bool holds = false;      // sup_abs_b finite and min_ratio > 0
};
BoundedGrowthCheck bounded_growth_check(const VarianceProfile& profile, std::size_t n_max);

/// Labeled heuristic only: does b_n settle, and does sigma_n^2 / n approach b^2?
struct ConvergenceHeuristic {
    double b_limit = 0.0;       // b_{n_max}
    double b_drift = 0.0;       // max |b_j - b_{n_max}| over the upper half
    double variance_ratio = 0.0; // sigma_{n_max}^2 / n_max
};
ConvergenceHeuristic convergence_heuristic(const VarianceProfile& profile, std::size_t n_max);

struct ConditionReport {
    HannanSum hannan;
    MaxwellWoodroofe mw;
    Condition2Result cond2;
    BoundedGrowthCheck growth;
    ConvergenceHeuristic convergence;

    static std::vector<std::string> csv_header();
    std::vector<std::string> csv_row() const;
    std::string text() const;
};

ConditionReport condition_report(const CoefficientSeq& a, const VarianceProfile& profile, std::size_t n_max,
                                 const CounterexampleSpec* spec = nullptr);

} // namespace linproc
