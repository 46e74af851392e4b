#pragma once

#include "core/coefficients.hpp"
#include "core/counterexample.hpp"
#include "core/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace linproc {

enum class MarkKind { sign, gaussian };

// The innovation e is a sum of independent marked towers: tower k fires at
// time t iff (p_k + t) mod heights[k] == 0, and then contributes
// weights[k] * mark(k, t). A single tower of height 1 is an iid sequence.
struct InnovationModel {
    std::vector<double> weights;
    std::vector<std::uint64_t> heights;
    MarkKind marks = MarkKind::sign;

    static InnovationModel towers(const InnovationSpec& spec);
    static InnovationModel rademacher();
    static InnovationModel gaussian();

    std::size_t tower_count() const noexcept { return weights.size(); }
    bool iid() const noexcept { return heights.size() == 1 && heights[0] == 1; }
    /// ||e||_2^2 = sum_k w_k^2 / h_k
    double norm_sq() const;
};

struct LinearProcess {
    CoefficientSeq coefficients;
    InnovationModel innovations;
};

/// One innovation value at a fixed time; `tower` is 0-based.
struct Atom {
    std::size_t tower = 0;
    std::int64_t t = 0;
    double value = 0.0;
};

// A realized F_0-atom: tower phases plus the innovation values at the times
// t in [-past_window, 0]. Everything F_0-measurable that S_n can depend on.
struct OmegaState {
    std::vector<std::uint64_t> phases;
    std::vector<std::uint64_t> heights;
    std::vector<Atom> past;  // sorted by t, then tower
    std::size_t past_window = 0;
    std::uint64_t seed = 0;

    bool aligned(std::size_t tower, std::int64_t t) const;
    /// Key of the stream that produced the past marks.
    std::uint64_t past_key() const noexcept;
};

OmegaState sample_omega(const InnovationModel& model, std::size_t past_window, std::uint64_t seed);

struct ForcedOmega {
    OmegaState omega;
    std::uint64_t attempts = 0;  // phase vectors drawn until no other tower fired at N - 1
};

/// Aligns tower `tower` (0-based) at time N - 1 and rejection-samples the
/// other phases until none of them fires there. Needs N >= 2 so that the
/// forced atom carries a future sign. Throws Error(infeasible) when another
/// tower has height 1 or the attempt budget runs out.
ForcedOmega force_bad_omega(const InnovationModel& model, std::size_t past_window, std::size_t tower,
                            std::uint64_t N, std::uint64_t seed, std::uint64_t max_attempts = 1'000'000);

/// e∘T^t: past values come from omega, t >= 1 from the future stream.
double innovation_at(const InnovationModel& model, const OmegaState& omega, std::int64_t t,
                     const SignStream& future);

struct PathSample {
    std::vector<double> s;              // s[n-1] = S_n for n = 1..N
    std::vector<double> cond_exp_path;  // E(S_n | F_0) for n = 1..N
    double cond_exp = 0.0;              // E(S_N | F_0)
    std::size_t innovations_used = 0;   // nonzero innovation atoms touched
};

/// Exact path sums by per-atom difference-array updates over the runs of
/// equal coefficients, O(atoms * runs + N).
PathSample path_sum(const LinearProcess& process, const OmegaState& omega, std::size_t N, const SignStream& future);

struct TerminalSum {
    double s = 0.0;         // S_N
    double cond_exp = 0.0;  // E(S_N | F_0)
};

/// S_N only, from b: each atom at t adds value * (b_{N-t} - b_{-t}).
/// `b` must hold b_0..b_{N+L}.
TerminalSum terminal_sum(const LinearProcess& process, const std::vector<double>& b, const OmegaState& omega,
                         std::size_t N, const SignStream& future);

struct ConditionalLaw {
    std::vector<double> centered;    // (S_N - E(S_N|F_0)) / sigma_N, one per replicate
    std::vector<double> uncentered;  // S_N / sigma_N
    double cond_exp = 0.0;           // E(S_N|F_0) / sigma_N
    double sigma = 0.0;
    /// sum_{t=1}^{N-1} b_{N-t}^2 E(e_t^2 | F_0): exact conditional variance of S_N
    double conditional_variance = 0.0;
};

/// M replicates under m_omega: the F_0 data is shared, the future marks are
/// fresh per replicate (stream split_seed(seed, {r})).
ConditionalLaw conditional_law(const LinearProcess& process, const OmegaState& omega, std::size_t N, std::size_t M,
                               std::uint64_t seed, double sigma_N, unsigned threads);

} // namespace linproc
