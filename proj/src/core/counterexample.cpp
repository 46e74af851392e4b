#include "core/counterexample.hpp"

#include "core/error.hpp"
#include "core/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace linproc {

std::vector<double> gamma_raw(std::size_t K) {
    std::vector<double> raw(K);
    double product = 1.0;
    for (std::size_t k = 1; k <= K; ++k) {
        product *= 1.0 - 1.0 / static_cast<double>(k + 1);
        raw[k - 1] = 2.0 / static_cast<double>(k + 2) * product;
    }
    return raw;
}

GammaSchedule gamma_schedule(std::size_t K) {
    require(K >= 1, "gamma schedule needs K >= 1");
    GammaSchedule g;
    g.raw = gamma_raw(K);
    CompensatedSum total;
    for (double x : g.raw) total.add(x);
    g.normalized.reserve(K);
    for (double x : g.raw) g.normalized.push_back(x / total.value());
    return g;
}

std::uint64_t CounterexampleSpec::block_end(std::size_t k) const {
    require(k >= 1 && k <= N.size(), "tower index out of range");
    return k < N.size() ? N[k] : 4 * N[k - 1];
}

bool CounterexampleSpec::is_scheduled(std::size_t k) const {
    return std::find(scheduled.begin(), scheduled.end(), k) != scheduled.end();
}

CounterexampleSpec make_counterexample(const CounterexampleParams& params) {
    require(!params.V.empty(), "counterexample needs at least one block length V_k");
    require(params.V.front() >= 1, "V_1 must be positive");
    for (std::size_t k = 1; k < params.V.size(); ++k)
        require(params.V[k] >= 2 * params.V[k - 1],
                "V must grow at least geometrically: V_" + std::to_string(k + 1) + " < 2 V_" + std::to_string(k));
    for (auto n : params.N) require(n >= 1, "tower scales N_k must be positive");
    require(params.kappa.empty() || params.kappa.size() == params.N.size(),
            "kappa must have one entry per tower scale N_k");
    for (double x : params.kappa) require(std::isfinite(x) && x > 0.0, "kappa entries must be positive");

    CounterexampleSpec spec;
    spec.K = params.V.size();
    spec.V = params.V;
    spec.N = params.N;
    spec.renormalize = params.renormalize;
    const auto g = gamma_schedule(spec.K);
    spec.gamma = params.renormalize ? g.normalized : g.raw;

    spec.kappa = params.kappa;
    if (spec.kappa.empty())
        for (std::size_t k = 1; k <= spec.N.size(); ++k) spec.kappa.push_back(std::ldexp(1.0, static_cast<int>(k)));

    if (params.scheduled.empty()) {
        for (std::size_t k = 1; k <= spec.N.size(); k += 2) spec.scheduled.push_back(k);
    } else {
        for (auto k : params.scheduled)
            require(k >= 1 && k <= spec.N.size(), "scheduled tower index " + std::to_string(k) + " out of range");
        spec.scheduled = params.scheduled;
        std::sort(spec.scheduled.begin(), spec.scheduled.end());
        spec.scheduled.erase(std::unique(spec.scheduled.begin(), spec.scheduled.end()), spec.scheduled.end());
    }

    if (!spec.N.empty()) {
        CompensatedSum zeta3;
        for (std::size_t k = 1; k <= spec.N.size(); ++k) zeta3.add(std::pow(static_cast<double>(k), -3.0));
        spec.d = 2.0 / std::sqrt(zeta3.value());
    }
    return spec;
}

CoefficientSeq coefficients_of_f(const CounterexampleSpec& spec) {
    const std::size_t L = spec.V_max();
    std::vector<double> a(L + 1, 0.0);
    a[0] = 1.0;
    // On the block (V_{k-1}, V_k] only the terms j >= k contribute.
    std::vector<double> suffix(spec.K + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t k = spec.K; k >= 1; --k) {
        acc.add(spec.gamma[k - 1] / static_cast<double>(spec.V[k - 1]));
        suffix[k - 1] = acc.value();
    }
    std::size_t lo = 1;
    for (std::size_t k = 1; k <= spec.K; ++k) {
        for (std::size_t i = lo; i <= spec.V[k - 1]; ++i) a[i] = -suffix[k - 1];
        lo = spec.V[k - 1] + 1;
    }
    return CoefficientSeq(std::move(a));
}

double InnovationSpec::norm_sq() const {
    CompensatedSum s;
    for (std::size_t k = 0; k < weights.size(); ++k)
        s.add(weights[k] * weights[k] / static_cast<double>(tower_heights[k]));
    return s.value();
}

InnovationSpec innovation_spec(const CounterexampleSpec& spec) {
    require(spec.tower_count() >= 1, "innovation needs at least one tower scale N_k");
    InnovationSpec e;
    e.K = spec.tower_count();
    e.d = spec.d;
    for (std::size_t k = 1; k <= e.K; ++k) {
        const double Nk = static_cast<double>(spec.N[k - 1]);
        e.weights.push_back(spec.d * std::sqrt(Nk) / std::pow(static_cast<double>(k), 1.5));
        e.tower_heights.push_back(4 * spec.N[k - 1]);
    }
    return e;
}

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ScheduleCheck& c) { return c.pass; });
}

const ScheduleCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

ScheduleCheck at_most(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs <= rhs, lhs, rhs, rhs - lhs};
}

} // namespace

ValidationReport validate_schedule(const CounterexampleSpec& spec, const VarianceProfile& profile) {
    std::uint64_t needed = 0;
    for (auto n : spec.N) needed = std::max(needed, 4 * n);
    require(profile.n_max() >= needed,
            "variance profile covers n <= " + std::to_string(profile.n_max()) + " but the schedule needs n <= " +
                std::to_string(needed));

    ValidationReport r;

    CompensatedSum gsum;
    for (double g : spec.gamma) gsum.add(g);
    if (spec.renormalize) {
        ScheduleCheck c{"gamma_sum", std::fabs(gsum.value() - 1.0) <= 1e-14, gsum.value(), 1.0,
                        1e-14 - std::fabs(gsum.value() - 1.0)};
        r.checks.push_back(c);
    }

    for (std::size_t k = 1; k < spec.K; ++k)
        r.checks.push_back(at_most("V_growth_" + std::to_string(k), 2.0 * static_cast<double>(spec.V[k - 1]),
                                   static_cast<double>(spec.V[k])));

    CompensatedSum mass;
    for (auto n : spec.N) mass.add(1.0 / (4.0 * static_cast<double>(n)));
    {
        // strict inequality
        ScheduleCheck c{"tower_mass", mass.value() < 0.5, mass.value(), 0.5, 0.5 - mass.value()};
        r.checks.push_back(c);
    }

    for (auto k : spec.scheduled) {
        const auto tag = std::to_string(k);
        const std::uint64_t Nk = spec.N[k - 1];
        if (k < spec.tower_count()) {
            const double next = static_cast<double>(spec.N[k]);
            const double want = 4.0 * static_cast<double>(Nk);
            r.checks.push_back({"N_step_" + tag, next == want, next, want, next == want ? 0.0 : -std::fabs(next - want)});
        }
        const double s_N = profile.sigma(Nk);
        const double s_4N = profile.sigma(4 * Nk);
        r.checks.push_back(at_most("sigma_doubling_" + tag, s_4N, 2.0 * s_N));
        r.checks.push_back(at_most("gap_" + tag, spec.kappa[k - 1] * s_N,
                                   std::sqrt(static_cast<double>(Nk)) / std::pow(static_cast<double>(k), 1.5)));
    }

    const auto raw = gamma_raw(spec.K + 1);
    CompensatedSum prefix;
    prefix.add(raw[0]);
    for (std::size_t k = 1; k <= spec.K; ++k) {
        prefix.add(raw[k]);  // now sum_{j<=k+1}
        r.divergence.push_back(std::sqrt(static_cast<double>(spec.V[k - 1])) * (1.0 - prefix.value()));
    }
    return r;
}

namespace {

double sum_inv_sqrt(std::uint64_t upto) {
    CompensatedSum s;
    for (std::uint64_t n = 1; n <= upto; ++n) s.add(1.0 / std::sqrt(static_cast<double>(n)));
    return s.value();
}

// sum_{n > m} n^{-3/2} = zeta(3/2) - sum_{n <= m} n^{-3/2}
double tail_inv_pow32(std::uint64_t m) {
    CompensatedSum s;
    s.add(std::riemann_zeta(1.5));
    for (std::uint64_t n = m; n >= 1; --n) s.add(-std::pow(static_cast<double>(n), -1.5));
    return s.value();
}

} // namespace

std::vector<ComponentBound> mw_component_bounds(const CounterexampleSpec& spec) {
    std::vector<ComponentBound> out;
    for (std::size_t k = 1; k <= spec.K; ++k) {
        ComponentBound c;
        c.k = k;
        c.gamma = spec.gamma[k - 1];
        c.V = spec.V[k - 1];
        const double v = static_cast<double>(c.V);
        c.C = std::sqrt(2.0) / std::sqrt(v) * sum_inv_sqrt(c.V) + std::sqrt(v) * tail_inv_pow32(c.V);
        c.bound = c.C * c.gamma;
        out.push_back(c);
    }
    return out;
}

double mw_certificate(const CounterexampleSpec& spec) {
    CompensatedSum s;
    s.add(std::riemann_zeta(1.5));
    for (const auto& c : mw_component_bounds(spec)) s.add(c.bound);
    return s.value();
}

double cond_exp_norm_bound(const CounterexampleSpec& spec, std::uint64_t n) {
    CompensatedSum s;
    s.add(1.0);
    for (std::size_t k = 1; k <= spec.K; ++k) {
        const double v = static_cast<double>(spec.V[k - 1]);
        const double g = spec.gamma[k - 1];
        if (n <= spec.V[k - 1])
            s.add(std::sqrt(2.0) * g * static_cast<double>(n) / std::sqrt(v));
        else
            s.add(g * std::sqrt(v));
    }
    return s.value();
}

} // namespace linproc
