#pragma once

#include "core/coefficients.hpp"
#include "core/variance.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace linproc {

/// Weights gamma_1..gamma_K (index 0 holds k = 1).
struct GammaSchedule {
    std::vector<double> raw;         // 2/(k+2) * prod_{j<=k} (1 - 1/(j+1))
    std::vector<double> normalized;  // raw / sum(raw)
};

/// Raw weights from the product formula, evaluated factor by factor.
std::vector<double> gamma_raw(std::size_t K);
GammaSchedule gamma_schedule(std::size_t K);

struct CounterexampleParams {
    std::vector<std::uint64_t> V;        // block lengths; K = V.size()
    std::vector<std::uint64_t> N;        // tower scales N_1..N_J
    std::vector<double> kappa;           // gap multipliers; empty means 2^k
    std::vector<std::size_t> scheduled;  // 1-based tower indices; empty means all odd k
    bool renormalize = true;
};

/// The complete non-quenched construction at truncation level K.
struct CounterexampleSpec {
    std::size_t K = 0;
    std::vector<double> gamma;  // weights actually used in f (normalized unless raw mode)
    std::vector<std::uint64_t> V;
    std::vector<std::uint64_t> N;
    std::vector<double> kappa;
    std::vector<std::size_t> scheduled;
    bool renormalize = true;
    double d = 0.0;  // innovation normalizer over the J = N.size() towers

    std::size_t tower_count() const noexcept { return N.size(); }
    std::uint64_t V_max() const noexcept { return V.empty() ? 0 : V.back(); }
    /// Upper end of the block [N_k, N_{k+1}) that belongs to tower k; 4 N_k for the last tower.
    std::uint64_t block_end(std::size_t k) const;
    bool is_scheduled(std::size_t k) const;
};

/// Throws Error(invalid_argument) when the structural invariants fail: V
/// strictly increasing with V_{k+1} >= 2 V_k, positive N, kappa sized to N,
/// scheduled indices within 1..J.
CounterexampleSpec make_counterexample(const CounterexampleParams& params);

/// a_0 = 1 and a_i = -sum_{k : V_k >= i} gamma_k / V_k for 1 <= i <= V_K.
CoefficientSeq coefficients_of_f(const CounterexampleSpec& spec);

struct InnovationSpec {
    std::size_t K = 0;                        // number of towers
    std::vector<double> weights;              // d sqrt(N_k) / k^{3/2}
    std::vector<std::uint64_t> tower_heights; // 4 N_k
    double d = 0.0;

    /// sum_k w_k^2 / (4 N_k)
    double norm_sq() const;
};

InnovationSpec innovation_spec(const CounterexampleSpec& spec);

struct ScheduleCheck {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs for "<=" checks; positive means slack
};

struct ValidationReport {
    std::vector<ScheduleCheck> checks;
    /// sqrt(V_k) (1 - sum_{j<=k+1} gamma_j) with the raw weights, k = 1..K.
    std::vector<double> divergence;

    bool pass() const;
    const ScheduleCheck* find(const std::string& name) const;
};

/// Evaluates the tower-schedule inequalities from the computed sigma values.
/// The profile must cover n up to 4 max(N).
ValidationReport validate_schedule(const CounterexampleSpec& spec, const VarianceProfile& profile);

struct ComponentBound {
    std::size_t k = 0;
    double gamma = 0.0;
    std::uint64_t V = 0;
    double C = 0.0;      // sqrt(2/V) sum_{n<=V} n^{-1/2} + sqrt(V) sum_{n>V} n^{-3/2}
    double bound = 0.0;  // C * gamma
};

/// Per-block bound on sum_n ||E(S_n(h_k)|F_0)||_2 / n^{3/2}.
std::vector<ComponentBound> mw_component_bounds(const CounterexampleSpec& spec);

/// Certificate for the full f = e + sum_k h_k: zeta(3/2) ||e|| + sum_k bound_k.
double mw_certificate(const CounterexampleSpec& spec);

/// Bound on ||E(S_n(f)|F_0)||_2 from the per-block estimates: 1 + sum_k of
/// sqrt(2) gamma_k n / sqrt(V_k) (n <= V_k) or gamma_k sqrt(V_k) (n > V_k).
double cond_exp_norm_bound(const CounterexampleSpec& spec, std::uint64_t n);

} // namespace linproc
