#pragma once

#include "core/counterexample.hpp"
#include "core/sampler.hpp"
#include "core/variance.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace linproc {

/// A declared threshold and its outcome. Lower bounds use ">=", upper "<" or "<=".
struct Verdict {
    std::string name;
    double value = 0.0;
    std::string relation;
    double threshold = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, double>> statistics;  // in emission order
    std::vector<Verdict> verdicts;
    std::uint64_t seed = 0;
    std::vector<double> ecdf_samples;  // sorted, for the distribution artifacts

    bool pass() const;
    /// Throws Error(invalid_argument) for an unknown name.
    double stat(const std::string& name) const;
    const Verdict& verdict(const std::string& name) const;

    void add(std::string stat_name, double value);
    void check_at_least(std::string check_name, double value, double threshold);
    void check_below(std::string check_name, double value, double threshold);
    void check_at_most(std::string check_name, double value, double threshold);
};

/// z used for every Monte Carlo margin.
inline constexpr double verdict_z = 3.0;

struct AnnealedOptions {
    std::size_t N = 0;
    std::size_t M = 50'000;
    double ks_max = 0.05;
};
/// KS distance of S_N / sigma_N from the standard normal, fresh omega per replicate.
ExperimentReport annealed_clt(const LinearProcess& process, const AnnealedOptions& opt, std::uint64_t seed,
                              unsigned threads);

struct QuenchedOptions {
    std::size_t N = 0;
    std::size_t M = 10'000;
    std::size_t omegas = 20;
    double ks_max = 0.05;
};
/// Per-omega KS distance of (S_N - E(S_N|F_0)) / sigma_bar_N. Refuses with
/// Error(precondition) unless the innovations are iid or the ratio condition
/// heuristic passes up to N.
ExperimentReport quenched_clt(const LinearProcess& process, const QuenchedOptions& opt, std::uint64_t seed,
                              unsigned threads);

struct FailureOptions {
    std::size_t tower = 1;            // 1-based, must be scheduled
    std::size_t N = 0;                // 0 means N_k
    std::size_t M = 10'000;
    std::optional<double> threshold;  // default kappa_k / 2
};
/// Conditional tail masses under m_omega for omega forced into the bad set.
/// Refuses with Error(precondition) unless the schedule validates.
ExperimentReport quenched_failure(const CounterexampleSpec& spec, const FailureOptions& opt, std::uint64_t seed,
                                  unsigned threads);

struct WipOptions {
    std::size_t tower = 1;
    std::size_t M = 10'000;
    std::optional<double> threshold;  // default w_k / sigma at the block end
};
/// Unconditional frequency of large block maxima over N_k <= N < N_{k+1}.
ExperimentReport wip_failure(const CounterexampleSpec& spec, const WipOptions& opt, std::uint64_t seed,
                             unsigned threads);

struct TnOptions {
    std::vector<std::size_t> grid;  // empty means powers of two plus the orbit length
    std::size_t orbit_length = 100'000;
    std::size_t orbits = 10;
    double spread_max = 0.05;
};
/// T_n e^2 along independent orbits and the coboundary bound for f = g - g∘T.
ExperimentReport tn_convergence(const LinearProcess& process, const TnOptions& opt, std::uint64_t seed,
                                unsigned threads);

struct TrendOptions {
    double band_min = 0.7;  // required sigma_bar / sigma at n = V_K
};
ExperimentReport ratio_trends(const CounterexampleSpec& spec, const TrendOptions& opt);

/// sigma_N of the process: the profile value scaled by ||e||_2.
double process_sigma(const LinearProcess& process, const VarianceProfile& profile, std::size_t N);

} // namespace linproc
