#include "core/conditions.hpp"

#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace linproc {

namespace {

void require_covers(const VarianceProfile& profile, std::size_t n_max) {
    if (profile.n_max() < n_max)
        fail(ErrorCode::invalid_argument, "variance profile covers n <= " + std::to_string(profile.n_max()) +
                                              ", requested n_max = " + std::to_string(n_max));
}

} // namespace

Condition2Result check_condition2(const VarianceProfile& profile, std::size_t n_max) {
    require(n_max >= 2, "ratio condition needs n_max >= 2");
    require_covers(profile, n_max);

    bool any_nonzero = false;
    for (std::size_t k = 1; k <= n_max; ++k) any_nonzero = any_nonzero || profile.b[k] != 0.0;
    if (!any_nonzero) fail(ErrorCode::degenerate, "degenerate process: b_k = 0 for every k <= n_max");

    Condition2Result r;
    r.n_max = n_max;
    double best = -1.0;
    bool infinite = false;

    const std::size_t lo = std::max<std::size_t>(2, n_max / 100);
    std::vector<double> xs, ys;

    // running max of b_k^2 over k <= n, first attaining k kept
    double bmax = profile.b[1] * profile.b[1];
    std::size_t kmax = 1;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const double bn = profile.b[n] * profile.b[n];
        if (bn > bmax) {
            bmax = bn;
            kmax = n;
        }
        const double sbar = profile.sigma_bar_sq[n];
        if (sbar == 0.0) {
            if (bmax > 0.0 && !infinite) {
                infinite = true;
                r.n = n;
                r.k = kmax;
            }
            continue;
        }
        const double c = static_cast<double>(n) * bmax / sbar;
        if (!infinite && c > best) {
            best = c;
            r.n = n;
            r.k = kmax;
        }
        if (n >= lo && c > 0.0) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(c);
        }
    }

    if (infinite) {
        r.c = ExtendedReal::infinity();
        r.bounded = false;
        r.log_slope = INFINITY;
        return r;
    }
    r.c = ExtendedReal::finite(best);
    r.log_slope = log_log_slope(xs, ys);
    r.bounded = r.log_slope <= condition2_slope_cutoff;
    return r;
}

HannanSum hannan_sum(const CoefficientSeq& a) {
    CompensatedSum s;
    for (double x : a.values()) s.add(std::fabs(x));
    return {s.value(), !a.exact()};
}

MaxwellWoodroofe maxwell_woodroofe_sum(const VarianceProfile& profile, std::size_t n_max) {
    require_covers(profile, n_max);
    CompensatedSum s;
    for (std::size_t n = 1; n <= n_max; ++n)
        s.add(std::sqrt(profile.cond_exp_norm_sq[n]) / std::pow(static_cast<double>(n), 1.5));
    return {s.value(), ExtendedReal::unknown()};
}

MaxwellWoodroofe maxwell_woodroofe_sum(const VarianceProfile& profile, std::size_t n_max,
                                       const CounterexampleSpec& spec) {
    auto mw = maxwell_woodroofe_sum(profile, n_max);
    // Finite part up to the largest block, then a constant bound times
    // sum_{n > M} n^{-3/2} <= 2 / sqrt(M).
    const std::uint64_t M = std::max<std::uint64_t>(n_max, spec.V_max());
    CompensatedSum tail;
    for (std::uint64_t n = n_max + 1; n <= M; ++n)
        tail.add(cond_exp_norm_bound(spec, n) / std::pow(static_cast<double>(n), 1.5));
    tail.add(cond_exp_norm_bound(spec, M + 1) * 2.0 / std::sqrt(static_cast<double>(M)));
    mw.tail_bound = ExtendedReal::finite(tail.value());
    return mw;
}

BoundedGrowthCheck bounded_growth_check(const VarianceProfile& profile, std::size_t n_max) {
    require(n_max >= 2, "growth check needs n_max >= 2");
    require_covers(profile, n_max);
    BoundedGrowthCheck g;
    for (std::size_t k = 0; k <= n_max; ++k) g.sup_abs_b = std::max(g.sup_abs_b, std::fabs(profile.b[k]));
    g.min_ratio = INFINITY;
    for (std::size_t n = std::max<std::size_t>(2, n_max / 2); n <= n_max; ++n)
        g.min_ratio = std::min(g.min_ratio, profile.sigma_bar_sq[n] / static_cast<double>(n));
    g.holds = std::isfinite(g.sup_abs_b) && g.min_ratio > 0.0;
    return g;
}

ConvergenceHeuristic convergence_heuristic(const VarianceProfile& profile, std::size_t n_max) {
    require(n_max >= 1, "convergence heuristic needs n_max >= 1");
    require_covers(profile, n_max);
    ConvergenceHeuristic h;
    h.b_limit = profile.b[n_max];
    for (std::size_t j = n_max / 2; j <= n_max; ++j)
        h.b_drift = std::max(h.b_drift, std::fabs(profile.b[j] - h.b_limit));
    h.variance_ratio = profile.sigma_sq[n_max] / static_cast<double>(n_max);
    return h;
}

std::vector<std::string> ConditionReport::csv_header() {
    return {"hannan_sum", "hannan_kind", "mw_partial",   "mw_tail_bound", "cond2_c",
            "cond2_n",    "cond2_k",     "cond2_n_max",  "cond2_slope",   "cond2_bounded"};
}

std::vector<std::string> ConditionReport::csv_row() const {
    return {csv::format_double(hannan.value),
            hannan.lower_bound ? "lower_bound" : "exact",
            csv::format_double(mw.partial),
            mw.tail_bound.to_string(),
            cond2.c.to_string(),
            csv::format_uint(cond2.n),
            csv::format_uint(cond2.k),
            csv::format_uint(cond2.n_max),
            std::isfinite(cond2.log_slope) ? csv::format_double(cond2.log_slope) : "inf",
            cond2.bounded ? "true" : "false"};
}

std::string ConditionReport::text() const {
    std::ostringstream os;
    os << "Hannan sum            " << csv::format_double(hannan.value)
       << (hannan.lower_bound ? " (lower bound, tail known only in l2)" : "") << "\n";
    os << "Maxwell-Woodroofe     partial " << csv::format_double(mw.partial) << ", tail bound "
       << mw.tail_bound.to_string() << "\n";
    os << "ratio condition       c = " << cond2.c.to_string() << " at (n, k) = (" << cond2.n << ", " << cond2.k
       << "), n <= " << cond2.n_max << "\n";
    os << "                      log-log slope " << csv::format_double(cond2.log_slope) << " -> "
       << (cond2.bounded ? "looks bounded" : "looks divergent") << " (heuristic)\n";
    os << "bounded b, growth     sup|b_k| = " << csv::format_double(growth.sup_abs_b)
       << ", min sigma_bar_n^2/n (upper half) = " << csv::format_double(growth.min_ratio) << " -> "
       << (growth.holds ? "holds on range" : "fails on range") << "\n";
    os << "b_n settling          b_limit = " << csv::format_double(convergence.b_limit)
       << ", drift = " << csv::format_double(convergence.b_drift)
       << ", sigma_n^2/n = " << csv::format_double(convergence.variance_ratio) << " (heuristic only)\n";
    return os.str();
}

ConditionReport condition_report(const CoefficientSeq& a, const VarianceProfile& profile, std::size_t n_max,
                                 const CounterexampleSpec* spec) {
    ConditionReport r;
    r.hannan = hannan_sum(a);
    r.mw = spec ? maxwell_woodroofe_sum(profile, n_max, *spec) : maxwell_woodroofe_sum(profile, n_max);
    r.cond2 = check_condition2(profile, n_max);
    r.growth = bounded_growth_check(profile, n_max);
    r.convergence = convergence_heuristic(profile, n_max);
    return r;
}

} // namespace linproc
