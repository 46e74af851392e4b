#include "core/sampler.hpp"

#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/parallel.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <string>

namespace linproc {

namespace {

constexpr std::uint64_t phase_tag = 1;
constexpr std::uint64_t past_tag = 2;

double mark(MarkKind kind, const SignStream& stream, std::size_t tower, std::int64_t t) {
    return kind == MarkKind::sign ? stream.sign(tower, t) : stream.gaussian(tower, t);
}

// First time >= from at which tower fires, given phase p and height h.
std::int64_t first_aligned(std::uint64_t p, std::uint64_t h, std::int64_t from) {
    const auto hh = static_cast<std::int64_t>(h);
    // (p + t) mod h == 0  <=>  t == -p mod h
    std::int64_t r = (-static_cast<std::int64_t>(p % h)) % hh;
    if (r < 0) r += hh;
    std::int64_t q = (from - r) / hh;
    std::int64_t t = r + q * hh;
    while (t < from) t += hh;
    while (t - hh >= from) t -= hh;
    return t;
}

std::vector<Atom> future_atoms(const InnovationModel& model, const OmegaState& omega, std::int64_t last,
                               const SignStream* future) {
    std::vector<Atom> atoms;
    for (std::size_t k = 0; k < model.tower_count(); ++k) {
        const auto h = static_cast<std::int64_t>(model.heights[k]);
        for (std::int64_t t = first_aligned(omega.phases[k], model.heights[k], 1); t <= last; t += h)
            atoms.push_back({k, t, future ? model.weights[k] * mark(model.marks, *future, k, t) : model.weights[k]});
    }
    return atoms;
}

void check_process(const LinearProcess& process, const OmegaState& omega) {
    require(process.coefficients.exact(), "sampling needs coefficients with exact finite support");
    require(omega.phases.size() == process.innovations.tower_count(), "omega does not match the innovation model");
    if (omega.past_window < process.coefficients.last_index())
        fail(ErrorCode::precondition, "omega past window " + std::to_string(omega.past_window) +
                                          " is shorter than the coefficient support " +
                                          std::to_string(process.coefficients.last_index()));
}

void materialize_past(const InnovationModel& model, OmegaState& omega) {
    const SignStream stream(omega.past_key());
    const auto W = static_cast<std::int64_t>(omega.past_window);
    omega.past.clear();
    for (std::size_t k = 0; k < model.tower_count(); ++k) {
        const auto h = static_cast<std::int64_t>(model.heights[k]);
        for (std::int64_t t = first_aligned(omega.phases[k], model.heights[k], -W); t <= 0; t += h)
            omega.past.push_back({k, t, model.weights[k] * mark(model.marks, stream, k, t)});
    }
    std::sort(omega.past.begin(), omega.past.end(),
              [](const Atom& x, const Atom& y) { return x.t != y.t ? x.t < y.t : x.tower < y.tower; });
}

} // namespace

InnovationModel InnovationModel::towers(const InnovationSpec& spec) {
    InnovationModel m;
    m.weights = spec.weights;
    m.heights = spec.tower_heights;
    return m;
}

InnovationModel InnovationModel::rademacher() { return {{1.0}, {1}, MarkKind::sign}; }

InnovationModel InnovationModel::gaussian() { return {{1.0}, {1}, MarkKind::gaussian}; }

double InnovationModel::norm_sq() const {
    CompensatedSum s;
    for (std::size_t k = 0; k < weights.size(); ++k) s.add(weights[k] * weights[k] / static_cast<double>(heights[k]));
    return s.value();
}

bool OmegaState::aligned(std::size_t tower, std::int64_t t) const {
    const auto h = static_cast<std::int64_t>(heights.at(tower));
    std::int64_t r = (static_cast<std::int64_t>(phases[tower]) + t % h) % h;
    return r == 0;
}

std::uint64_t OmegaState::past_key() const noexcept { return split_seed(seed, {past_tag}); }

OmegaState sample_omega(const InnovationModel& model, std::size_t past_window, std::uint64_t seed) {
    require(model.tower_count() > 0, "innovation model has no towers");
    OmegaState omega;
    omega.seed = seed;
    omega.past_window = past_window;
    omega.heights = model.heights;
    std::mt19937_64 gen(split_seed(seed, {phase_tag}));
    for (auto h : model.heights) omega.phases.push_back(std::uniform_int_distribution<std::uint64_t>(0, h - 1)(gen));
    materialize_past(model, omega);
    return omega;
}

ForcedOmega force_bad_omega(const InnovationModel& model, std::size_t past_window, std::size_t tower,
                            std::uint64_t N, std::uint64_t seed, std::uint64_t max_attempts) {
    require(tower < model.tower_count(), "tower index out of range");
    require(N >= 2, "forcing an atom at time N - 1 needs N >= 2");
    for (std::size_t j = 0; j < model.tower_count(); ++j)
        if (j != tower && model.heights[j] == 1)
            fail(ErrorCode::infeasible, "tower " + std::to_string(j + 1) +
                                            " has height 1 and fires at every time; no phase avoids it");

    ForcedOmega out;
    OmegaState& omega = out.omega;
    omega.seed = seed;
    omega.past_window = past_window;
    omega.heights = model.heights;
    omega.phases.assign(model.tower_count(), 0);

    const std::uint64_t h = model.heights[tower];
    const std::int64_t t_bad = static_cast<std::int64_t>(N) - 1;
    std::mt19937_64 gen(split_seed(seed, {phase_tag}));
    for (;;) {
        if (out.attempts == max_attempts)
            fail(ErrorCode::infeasible, "no phase vector avoided the other towers after " +
                                            std::to_string(max_attempts) + " attempts");
        ++out.attempts;
        for (std::size_t j = 0; j < model.tower_count(); ++j)
            omega.phases[j] = std::uniform_int_distribution<std::uint64_t>(0, model.heights[j] - 1)(gen);
        omega.phases[tower] = (h - static_cast<std::uint64_t>(t_bad) % h) % h;
        bool clash = false;
        for (std::size_t j = 0; j < model.tower_count() && !clash; ++j)
            clash = j != tower && omega.aligned(j, t_bad);
        if (!clash) break;
    }
    materialize_past(model, omega);
    return out;
}

double innovation_at(const InnovationModel& model, const OmegaState& omega, std::int64_t t, const SignStream& future) {
    const SignStream past(omega.past_key());
    const SignStream& stream = t <= 0 ? past : future;
    double e = 0.0;
    for (std::size_t k = 0; k < model.tower_count(); ++k)
        if (omega.aligned(k, t)) e += model.weights[k] * mark(model.marks, stream, k, t);
    return e;
}

PathSample path_sum(const LinearProcess& process, const OmegaState& omega, std::size_t N, const SignStream& future) {
    require(N >= 1, "path_sum needs N >= 1");
    check_process(process, omega);
    const auto runs = coefficient_runs(process.coefficients);
    const auto n = static_cast<std::int64_t>(N);

    std::vector<double> past_diff(N + 1, 0.0), future_diff(N + 1, 0.0);
    auto spread = [&](std::vector<double>& diff, const Atom& atom) {
        for (const auto& run : runs) {
            if (run.value == 0.0) continue;
            const std::int64_t lo = std::max<std::int64_t>(0, atom.t + static_cast<std::int64_t>(run.first));
            const std::int64_t hi = std::min<std::int64_t>(n - 1, atom.t + static_cast<std::int64_t>(run.last));
            if (lo > hi) continue;
            diff[static_cast<std::size_t>(lo)] += atom.value * run.value;
            diff[static_cast<std::size_t>(hi) + 1] -= atom.value * run.value;
        }
    };

    PathSample out;
    for (const auto& atom : omega.past) {
        spread(past_diff, atom);
        ++out.innovations_used;
    }
    for (const auto& atom : future_atoms(process.innovations, omega, n - 1, &future)) {
        spread(future_diff, atom);
        ++out.innovations_used;
    }

    out.s.resize(N);
    out.cond_exp_path.resize(N);
    double xp = 0.0, xf = 0.0, sp = 0.0, sf = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        xp += past_diff[j];
        xf += future_diff[j];
        sp += xp;
        sf += xf;
        out.cond_exp_path[j] = sp;
        out.s[j] = sp + sf;
    }
    out.cond_exp = out.cond_exp_path.back();
    return out;
}

TerminalSum terminal_sum(const LinearProcess& process, const std::vector<double>& b, const OmegaState& omega,
                         std::size_t N, const SignStream& future) {
    require(N >= 1, "terminal_sum needs N >= 1");
    check_process(process, omega);
    const std::size_t L = process.coefficients.last_index();
    require(b.size() >= N + L + 1, "partial sums do not reach b_{N+L}");

    const auto& model = process.innovations;
    TerminalSum out;
    for (const auto& atom : omega.past) {
        const auto back = static_cast<std::size_t>(-atom.t);
        if (back > L) continue;
        out.cond_exp += atom.value * (b[N + back] - b[back]);
    }
    double fluct = 0.0;
    const auto n = static_cast<std::int64_t>(N);
    for (std::size_t k = 0; k < model.tower_count(); ++k) {
        const auto h = static_cast<std::int64_t>(model.heights[k]);
        std::int64_t cached_block = -1;
        std::uint64_t word = 0;
        for (std::int64_t t = first_aligned(omega.phases[k], model.heights[k], 1); t <= n - 1; t += h) {
            double m;
            if (model.marks == MarkKind::sign) {
                if ((t >> 6) != cached_block) {
                    cached_block = t >> 6;
                    word = future.sign_word(k, cached_block);
                }
                m = (word >> (static_cast<std::uint64_t>(t) & 63)) & 1 ? 1.0 : -1.0;
            } else {
                m = future.gaussian(k, t);
            }
            fluct += model.weights[k] * m * b[static_cast<std::size_t>(n - t)];
        }
    }
    out.s = out.cond_exp + fluct;
    return out;
}

ConditionalLaw conditional_law(const LinearProcess& process, const OmegaState& omega, std::size_t N, std::size_t M,
                               std::uint64_t seed, double sigma_N, unsigned threads) {
    require(M >= 100, "conditional_law needs at least 100 replicates");
    require(N >= 1, "conditional_law needs N >= 1");
    require(sigma_N > 0.0, "conditional_law needs sigma_N > 0");
    check_process(process, omega);
    const std::size_t L = process.coefficients.last_index();
    const auto b = partial_sums(process.coefficients, N + L);
    const auto& model = process.innovations;

    ConditionalLaw law;
    law.sigma = sigma_N;
    // the future stream does not enter E(S_N | F_0)
    const double ce = terminal_sum(process, b, omega, N, SignStream(0)).cond_exp;
    law.cond_exp = ce / sigma_N;

    // Future atoms with their deterministic coefficients w_k b_{N-t}, in (tower, t) order.
    auto atoms = future_atoms(model, omega, static_cast<std::int64_t>(N) - 1, nullptr);
    CompensatedSum var;
    for (auto& atom : atoms) {
        atom.value *= b[N - static_cast<std::size_t>(atom.t)];
        var.add(atom.value * atom.value);
    }
    law.conditional_variance = var.value();

    law.centered.assign(M, 0.0);
    law.uncentered.assign(M, 0.0);
    // Sign marks: atoms of one tower in one 64-step word with equal
    // coefficients collapse to value * (2 popcount(word & mask) - count).
    struct Segment {
        std::size_t tower;
        std::int64_t block;
        std::uint64_t mask;
        double value;
    };
    std::vector<Segment> segments;
    if (model.marks == MarkKind::sign) {
        for (const auto& atom : atoms) {
            const std::int64_t blk = atom.t >> 6;
            const std::uint64_t bit = std::uint64_t{1} << (static_cast<std::uint64_t>(atom.t) & 63);
            if (!segments.empty() && segments.back().tower == atom.tower && segments.back().block == blk &&
                segments.back().value == atom.value)
                segments.back().mask |= bit;
            else
                segments.push_back({atom.tower, blk, bit, atom.value});
        }
    }

    law.centered.assign(M, 0.0);
    law.uncentered.assign(M, 0.0);
    parallel_for(M, threads, [&](std::size_t r) {
        const SignStream stream(split_seed(seed, {r}));
        double sum = 0.0;
        if (model.marks == MarkKind::sign) {
            std::size_t cached_tower = static_cast<std::size_t>(-1);
            std::int64_t cached_block = 0;
            std::uint64_t word = 0;
            for (const auto& seg : segments) {
                if (seg.tower != cached_tower || seg.block != cached_block) {
                    cached_tower = seg.tower;
                    cached_block = seg.block;
                    word = stream.sign_word(seg.tower, seg.block);
                }
                const int plus = std::popcount(word & seg.mask);
                const int count = std::popcount(seg.mask);
                sum += seg.value * static_cast<double>(2 * plus - count);
            }
        } else {
            for (const auto& atom : atoms) sum += atom.value * stream.gaussian(atom.tower, atom.t);
        }
        law.centered[r] = sum / sigma_N;
        law.uncentered[r] = (sum + ce) / sigma_N;
    });
    return law;
}

} // namespace linproc
