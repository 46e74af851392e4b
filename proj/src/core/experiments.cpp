#include "core/experiments.hpp"

#include "core/conditions.hpp"
#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/parallel.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace linproc {

bool ExperimentReport::pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

double ExperimentReport::stat(const std::string& stat_name) const {
    for (const auto& [key, value] : statistics)
        if (key == stat_name) return value;
    fail(ErrorCode::invalid_argument, "report '" + name + "' has no statistic '" + stat_name + "'");
}

const Verdict& ExperimentReport::verdict(const std::string& check_name) const {
    for (const auto& v : verdicts)
        if (v.name == check_name) return v;
    fail(ErrorCode::invalid_argument, "report '" + name + "' has no verdict '" + check_name + "'");
}

void ExperimentReport::add(std::string stat_name, double value) { statistics.emplace_back(std::move(stat_name), value); }

void ExperimentReport::check_at_least(std::string check_name, double value, double threshold) {
    verdicts.push_back({std::move(check_name), value, ">=", threshold, value >= threshold});
}

void ExperimentReport::check_below(std::string check_name, double value, double threshold) {
    verdicts.push_back({std::move(check_name), value, "<", threshold, value < threshold});
}

void ExperimentReport::check_at_most(std::string check_name, double value, double threshold) {
    verdicts.push_back({std::move(check_name), value, "<=", threshold, value <= threshold});
}

double process_sigma(const LinearProcess& process, const VarianceProfile& profile, std::size_t N) {
    return profile.sigma(N) * std::sqrt(process.innovations.norm_sq());
}

namespace {

// Threshold comparisons at exactly an atom magnitude would otherwise hinge
// on the last bit of a long floating sum.
constexpr double threshold_guard = 1.0 - 1e-12;

std::vector<double> sorted_copy(const std::vector<double>& v) {
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    return s;
}

LinearProcess counterexample_process(const CounterexampleSpec& spec) {
    return {coefficients_of_f(spec), InnovationModel::towers(innovation_spec(spec))};
}

void require_validated(const CounterexampleSpec& spec, const VarianceProfile& profile, std::size_t tower) {
    require(tower >= 1 && tower <= spec.tower_count(), "tower index out of range");
    if (!spec.is_scheduled(tower))
        fail(ErrorCode::precondition, "tower " + std::to_string(tower) + " is not scheduled");
    const auto report = validate_schedule(spec, profile);
    for (const auto& c : report.checks)
        if (!c.pass)
            fail(ErrorCode::precondition, "schedule not validated: constraint '" + c.name + "' fails (lhs " +
                                              csv::format_double(c.lhs) + ", rhs " + csv::format_double(c.rhs) +
                                              "); refusing to run");
}

std::uint64_t max_needed(const CounterexampleSpec& spec) {
    std::uint64_t m = 0;
    for (auto n : spec.N) m = std::max(m, 4 * n);
    return m;
}

} // namespace

ExperimentReport annealed_clt(const LinearProcess& process, const AnnealedOptions& opt, std::uint64_t seed,
                              unsigned threads) {
    require(opt.N >= 1, "annealed run needs N >= 1");
    require(opt.M >= 1000, "annealed run needs at least 1000 replicates");
    const auto& a = process.coefficients;
    const std::size_t L = a.last_index();
    const auto profile = variance_profile(a, opt.N);
    const double sigma = process_sigma(process, profile, opt.N);
    if (!(sigma > 0.0)) fail(ErrorCode::degenerate, "sigma_N = 0: S_N is degenerate");
    const auto b = partial_sums(a, opt.N + L);

    std::vector<double> z(opt.M);
    parallel_for(opt.M, threads, [&](std::size_t r) {
        const auto omega = sample_omega(process.innovations, L, split_seed(seed, {r, 0}));
        const SignStream future(split_seed(seed, {r, 1}));
        z[r] = terminal_sum(process, b, omega, opt.N, future).s / sigma;
    });

    ExperimentReport rep;
    rep.name = "annealed";
    rep.seed = seed;
    rep.ecdf_samples = sorted_copy(z);
    const double ks = ks_statistic_sorted(rep.ecdf_samples);
    OnlineMoments mom;
    for (double x : z) mom.add(x);
    rep.add("N", static_cast<double>(opt.N));
    rep.add("M", static_cast<double>(opt.M));
    rep.add("sigma_N", sigma);
    rep.add("mean", mom.mean());
    rep.add("variance", mom.variance());
    rep.add("ks", ks);
    rep.check_below("ks", ks, opt.ks_max);
    return rep;
}

ExperimentReport quenched_clt(const LinearProcess& process, const QuenchedOptions& opt, std::uint64_t seed,
                              unsigned threads) {
    require(opt.N >= 2, "quenched run needs N >= 2");
    require(opt.omegas >= 1, "quenched run needs at least one omega");
    const auto& a = process.coefficients;
    const std::size_t L = a.last_index();
    const auto profile = variance_profile(a, opt.N);
    if (!process.innovations.iid()) {
        const auto c2 = check_condition2(profile, opt.N);
        if (!c2.bounded)
            fail(ErrorCode::precondition, "innovations are not iid and the ratio condition heuristic fails (slope " +
                                              csv::format_double(c2.log_slope) + ")");
    }
    const double sigma = process_sigma(process, profile, opt.N);
    const double sigma_bar = profile.sigma_bar(opt.N) * std::sqrt(process.innovations.norm_sq());
    if (!(sigma_bar > 0.0)) fail(ErrorCode::degenerate, "sigma_bar_N = 0: centered sum is degenerate");

    ExperimentReport rep;
    rep.name = "quenched";
    rep.seed = seed;
    std::vector<double> ks(opt.omegas);
    for (std::size_t i = 0; i < opt.omegas; ++i) {
        const auto omega = sample_omega(process.innovations, L, split_seed(seed, {i, 0}));
        auto law = conditional_law(process, omega, opt.N, opt.M, split_seed(seed, {i, 1}), sigma, threads);
        for (double& x : law.centered) x *= sigma / sigma_bar;
        auto sorted = sorted_copy(law.centered);
        ks[i] = ks_statistic_sorted(sorted);
        if (i == 0) rep.ecdf_samples = std::move(sorted);
    }
    rep.add("N", static_cast<double>(opt.N));
    rep.add("M", static_cast<double>(opt.M));
    rep.add("omegas", static_cast<double>(opt.omegas));
    rep.add("sigma_bar_N", sigma_bar);
    for (std::size_t i = 0; i < ks.size(); ++i) rep.add("ks_omega_" + std::to_string(i + 1), ks[i]);
    const double med = median(ks);
    rep.add("ks_median", med);
    rep.add("ks_max", *std::max_element(ks.begin(), ks.end()));
    rep.check_below("ks_median", med, opt.ks_max);
    return rep;
}

ExperimentReport quenched_failure(const CounterexampleSpec& spec, const FailureOptions& opt, std::uint64_t seed,
                                  unsigned threads) {
    const std::size_t k = opt.tower;
    require(k >= 1 && k <= spec.tower_count(), "tower index out of range");
    const std::uint64_t Nk = spec.N[k - 1];
    const std::uint64_t N = opt.N == 0 ? Nk : opt.N;
    if (N < Nk || N >= spec.block_end(k))
        fail(ErrorCode::precondition, "N = " + std::to_string(N) + " lies outside the block [" + std::to_string(Nk) +
                                          ", " + std::to_string(spec.block_end(k)) + ") of tower " +
                                          std::to_string(k));

    const auto process = counterexample_process(spec);
    const auto profile = variance_profile(process.coefficients, std::max<std::uint64_t>(max_needed(spec), N));
    require_validated(spec, profile, k);

    const double sigma = process_sigma(process, profile, N);
    const double w = process.innovations.weights[k - 1];
    const double atom = w / sigma;
    const double thr = opt.threshold.value_or(spec.kappa[k - 1] / 2.0);

    const auto forced = force_bad_omega(process.innovations, process.coefficients.last_index(), k - 1, N,
                                        split_seed(seed, {0}));
    const auto law = conditional_law(process, forced.omega, N, opt.M, split_seed(seed, {1}), sigma, threads);

    ExperimentReport rep;
    rep.name = "failure";
    rep.seed = seed;
    rep.ecdf_samples = sorted_copy(law.centered);
    const double c_atom = exceedance(law.centered, atom * threshold_guard);
    const double u_atom = exceedance(law.uncentered, atom * threshold_guard);
    const double c_thr = exceedance(law.centered, thr);
    const double u_thr = exceedance(law.uncentered, thr);
    rep.add("tower", static_cast<double>(k));
    rep.add("N", static_cast<double>(N));
    rep.add("M", static_cast<double>(opt.M));
    rep.add("sigma_N", sigma);
    rep.add("rejection_attempts", static_cast<double>(forced.attempts));
    rep.add("cond_exp_over_sigma", law.cond_exp);
    rep.add("atom_threshold", atom);
    rep.add("centered_mass_atom", c_atom);
    rep.add("uncentered_mass_atom", u_atom);
    rep.add("threshold", thr);
    rep.add("centered_mass_threshold", c_thr);
    rep.add("uncentered_mass_threshold", u_thr);
    // standard errors at the null values 1/2 and 1/4 are at most 1/(2 sqrt(M))
    const double margin = verdict_z / (2.0 * std::sqrt(static_cast<double>(opt.M)));
    rep.check_at_least("centered_mass_atom", c_atom, 0.5 - margin);
    rep.check_at_least("uncentered_mass_atom", u_atom, 0.25 - margin);
    return rep;
}

ExperimentReport wip_failure(const CounterexampleSpec& spec, const WipOptions& opt, std::uint64_t seed,
                             unsigned threads) {
    const std::size_t k = opt.tower;
    require(k >= 1 && k <= spec.tower_count(), "tower index out of range");
    require(opt.M >= 1, "wip run needs at least one replicate");
    const std::uint64_t lo = spec.N[k - 1];
    const std::uint64_t end = spec.block_end(k);

    const auto process = counterexample_process(spec);
    const std::size_t L = process.coefficients.last_index();
    const auto profile = variance_profile(process.coefficients, std::max(max_needed(spec), end));
    require_validated(spec, profile, k);

    const double sigma = process_sigma(process, profile, end);
    const double thr = opt.threshold.value_or(process.innovations.weights[k - 1] / sigma);

    std::vector<double> centered(opt.M), uncentered(opt.M);
    parallel_for(opt.M, threads, [&](std::size_t r) {
        const auto omega = sample_omega(process.innovations, L, split_seed(seed, {r, 0}));
        const SignStream future(split_seed(seed, {r, 1}));
        const auto path = path_sum(process, omega, end - 1, future);
        double mc = 0.0, mu = 0.0;
        for (std::uint64_t n = lo; n < end; ++n) {
            mc = std::max(mc, std::fabs(path.s[n - 1] - path.cond_exp_path[n - 1]));
            mu = std::max(mu, std::fabs(path.s[n - 1]));
        }
        centered[r] = mc / sigma;
        uncentered[r] = mu / sigma;
    });

    ExperimentReport rep;
    rep.name = "wip";
    rep.seed = seed;
    rep.ecdf_samples = sorted_copy(centered);
    const double fc = exceedance(centered, thr * threshold_guard);
    const double fu = exceedance(uncentered, thr * threshold_guard);
    rep.add("tower", static_cast<double>(k));
    rep.add("block_start", static_cast<double>(lo));
    rep.add("block_end", static_cast<double>(end));
    rep.add("M", static_cast<double>(opt.M));
    rep.add("sigma_block_end", sigma);
    rep.add("threshold", thr);
    rep.add("centered_max_frequency", fc);
    rep.add("uncentered_max_frequency", fu);
    rep.check_at_least("centered_max_frequency", fc, 1.0 / 32 - verdict_z * binomial_se(1.0 / 32, opt.M));
    rep.check_at_least("uncentered_max_frequency", fu, 1.0 / 64 - verdict_z * binomial_se(1.0 / 64, opt.M));
    return rep;
}

namespace {

// sigma_bar_n^{-2} sum_{k=1}^{n-1} b_{n-k}^2 x_k, with x indexed by k (x[0] unused)
double tn_value(const VarianceProfile& profile, const std::vector<double>& x, std::size_t n) {
    CompensatedSum s;
    for (std::size_t k = 1; k < n; ++k) {
        const double b = profile.b[n - k];
        s.add(b * b * x[k]);
    }
    return s.value() / profile.sigma_bar_sq[n];
}

} // namespace

ExperimentReport tn_convergence(const LinearProcess& process, const TnOptions& opt, std::uint64_t seed,
                                unsigned threads) {
    require(opt.orbit_length >= 2, "orbit length must be at least 2");
    require(opt.orbits >= 2, "spread needs at least two orbits");
    const auto& a = process.coefficients;
    const std::size_t L = a.last_index();
    const std::size_t n_top = opt.orbit_length;

    std::vector<std::size_t> grid = opt.grid;
    if (grid.empty()) {
        for (std::size_t n = 2; n < n_top; n *= 2) grid.push_back(n);
        grid.push_back(n_top);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (auto n : grid) require(n >= 2 && n <= n_top, "grid points must lie in [2, orbit_length]");

    const auto profile = variance_profile(a, n_top);
    const auto c2 = check_condition2(profile, n_top);
    if (!c2.bounded)
        fail(ErrorCode::precondition, "ratio condition heuristic fails (slope " + csv::format_double(c2.log_slope) +
                                          "); T_n need not converge");
    const double c = c2.c.value();
    CompensatedSum a2;
    for (double x : a.values()) a2.add(x * x);
    const double A = std::sqrt(a2.value());

    const std::size_t G = grid.size();
    std::vector<double> tn(opt.orbits * G), cob(opt.orbits * G), bound(G);
    for (std::size_t j = 0; j < G; ++j) {
        const double n = static_cast<double>(grid[j]);
        bound[j] = 2.0 * A * std::sqrt(1.0 + c / n) / profile.sigma_bar(grid[j]) + c / n;
    }

    parallel_for(opt.orbits, threads, [&](std::size_t o) {
        const auto omega = sample_omega(process.innovations, L, split_seed(seed, {o, 0}));
        const SignStream future(split_seed(seed, {o, 1}));
        const SignStream gstream(split_seed(seed, {o, 2}));
        std::vector<double> e2(n_top + 1, 0.0), f(n_top + 1, 0.0);
        for (std::size_t t = 1; t <= n_top; ++t) {
            const double e = innovation_at(process.innovations, omega, static_cast<std::int64_t>(t), future);
            e2[t] = e * e;
        }
        // f = g - g∘T with g a bounded (+-1) sequence along the orbit
        for (std::size_t t = 1; t <= n_top; ++t)
            f[t] = gstream.sign(0, static_cast<std::int64_t>(t)) - gstream.sign(0, static_cast<std::int64_t>(t + 1));
        for (std::size_t j = 0; j < G; ++j) {
            tn[o * G + j] = tn_value(profile, e2, grid[j]);
            cob[o * G + j] = tn_value(profile, f, grid[j]);
        }
    });

    ExperimentReport rep;
    rep.name = "tn";
    rep.seed = seed;
    rep.add("orbit_length", static_cast<double>(n_top));
    rep.add("orbits", static_cast<double>(opt.orbits));
    rep.add("cond2_c", c);
    rep.add("A", A);
    std::vector<double> ones(n_top + 1, 1.0);
    double const_dev = 0.0;
    double worst_ratio = 0.0;
    for (std::size_t j = 0; j < G; ++j) {
        double lo = INFINITY, hi = -INFINITY, mean = 0.0;
        for (std::size_t o = 0; o < opt.orbits; ++o) {
            const double v = tn[o * G + j];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
            worst_ratio = std::max(worst_ratio, std::fabs(cob[o * G + j]) / bound[j]);
        }
        const std::string at = "@" + std::to_string(grid[j]);
        rep.add("tn_mean" + at, mean / static_cast<double>(opt.orbits));
        rep.add("tn_spread" + at, hi - lo);
        rep.add("coboundary_bound" + at, bound[j]);
        const_dev = std::max(const_dev, std::fabs(tn_value(profile, ones, grid[j]) - 1.0));
    }
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t o = 0; o < opt.orbits; ++o) {
        lo = std::min(lo, tn[o * G + G - 1]);
        hi = std::max(hi, tn[o * G + G - 1]);
    }
    rep.add("tn_spread_final", hi - lo);
    rep.add("constant_deviation", const_dev);
    rep.add("coboundary_worst_ratio", worst_ratio);
    rep.check_below("tn_spread_final", hi - lo, opt.spread_max);
    rep.check_at_most("coboundary_worst_ratio", worst_ratio, 1.0);
    rep.check_at_most("constant_deviation", const_dev, 1e-12);
    return rep;
}

ExperimentReport ratio_trends(const CounterexampleSpec& spec, const TrendOptions& opt) {
    const auto a = coefficients_of_f(spec);
    std::vector<std::uint64_t> points(spec.V.begin(), spec.V.end());
    for (auto n : spec.N) {
        points.push_back(n);
        points.push_back(4 * n);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::uint64_t top = points.back();
    const auto profile = variance_profile(a, top);
    const auto raw = gamma_raw(spec.K + 2);

    ExperimentReport rep;
    rep.name = "trends";
    for (auto n : points) {
        const std::string at = "@" + std::to_string(n);
        const double s = profile.sigma(n);
        rep.add("sigma_over_sqrt_n" + at, s / std::sqrt(static_cast<double>(n)));
        rep.add("cond_exp_over_sigma" + at, profile.cond_exp_norm(n) / s);
        rep.add("sigma_bar_over_sigma" + at, profile.sigma_bar(n) / s);
    }

    // sigma_n / sqrt(n) along the V grid, and the asymptotic ratios at n = V_k
    bool decreasing = true;
    for (std::size_t k = 1; k <= spec.K; ++k) {
        const std::uint64_t n = spec.V[k - 1];
        const double rn = std::sqrt(static_cast<double>(n));
        const std::string at = "@" + std::to_string(n);
        rep.add("lower_ratio" + at, profile.sigma(n) / (rn * static_cast<double>(k + 4) * raw[k + 1]));
        rep.add("cond_exp_ratio" + at, profile.cond_exp_norm(n) / ((raw[k - 1] + raw[k]) * rn));
        if (k > 1) {
            const std::uint64_t m = spec.V[k - 2];
            decreasing = decreasing && profile.sigma(n) / rn < profile.sigma(m) / std::sqrt(static_cast<double>(m));
        }
    }

    // each block component e - V^{-1} sum_{i<=V} U^{-i} e has ||S_n|| <= sqrt(2n)
    double worst = 0.0;
    for (std::size_t k = 1; k <= spec.K; ++k) {
        const std::uint64_t V = spec.V[k - 1];
        std::vector<double> ck(V + 1, -1.0 / static_cast<double>(V));
        ck[0] = 1.0;
        const auto pk = variance_profile(CoefficientSeq(std::move(ck)), top);
        for (auto n : points) worst = std::max(worst, pk.sigma(n) / std::sqrt(2.0 * static_cast<double>(n)));
    }

    const double ratio_end = profile.sigma_bar(spec.V_max()) / profile.sigma(spec.V_max());
    rep.add("component_worst_ratio", worst);
    rep.add("sigma_over_sqrt_n_decreasing", decreasing ? 1.0 : 0.0);
    rep.check_at_least("sigma_bar_over_sigma_at_V_K", ratio_end, opt.band_min);
    rep.check_at_least("sigma_over_sqrt_n_decreasing", decreasing ? 1.0 : 0.0, 1.0);
    rep.check_at_most("component_worst_ratio", worst, 1.0);
    return rep;
}

} // namespace linproc
