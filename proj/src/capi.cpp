#include "linproc.h"

#include "core/conditions.hpp"
#include "core/counterexample.hpp"
#include "core/error.hpp"
#include "core/run.hpp"
#include "core/variance.hpp"

#include <new>
#include <string>

struct lp_coeffs {
    linproc::CoefficientSeq a;
};

struct lp_profile {
    linproc::VarianceProfile p;
};

struct lp_cx_spec {
    linproc::CounterexampleSpec spec;
};

struct lp_run_result {
    linproc::RunResult result;
};

namespace {

thread_local std::string last_error;

template <class F>
lp_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return LP_OK;
    } catch (const linproc::Error& e) {
        last_error = e.what();
        return static_cast<lp_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return LP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return LP_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return LP_ERR_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (!p) linproc::fail(linproc::ErrorCode::invalid_argument, std::string(what) + " must not be NULL");
}

lp_extended to_c(const linproc::ExtendedReal& x) {
    if (x.is_finite()) return {LP_FINITE, x.value()};
    if (x.is_infinite()) return {LP_INFINITE, 0.0};
    return {LP_UNKNOWN, 0.0};
}

} // namespace

extern "C" {

const char* lp_version(void) { return linproc::version_string(); }

const char* lp_status_name(lp_status status) {
    switch (status) {
    case LP_OK: return "ok";
    case LP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case LP_ERR_DEGENERATE: return "degenerate";
    case LP_ERR_PRECONDITION: return "precondition";
    case LP_ERR_INFEASIBLE: return "infeasible";
    case LP_ERR_IO: return "io";
    case LP_ERR_PARSE: return "parse";
    default: return "internal";
    }
}

const char* lp_last_error(void) { return last_error.c_str(); }

lp_status lp_coeffs_create(const double* values, size_t length, double tail_l2, lp_coeffs** out) {
    return guarded([&] {
        need(out, "out");
        if (length > 0) need(values, "values");
        *out = new lp_coeffs{linproc::CoefficientSeq(std::vector<double>(values, values + length), tail_l2)};
    });
}

lp_status lp_coeffs_read_csv(const char* path, lp_coeffs** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new lp_coeffs{linproc::read_coefficients_csv(path)};
    });
}

lp_status lp_coeffs_write_csv(const lp_coeffs* a, const char* path, const char* header_comment) {
    return guarded([&] {
        need(a, "coefficients");
        need(path, "path");
        linproc::write_coefficients_csv(a->a, path, header_comment ? header_comment : "");
    });
}

void lp_coeffs_free(lp_coeffs* a) { delete a; }

size_t lp_coeffs_length(const lp_coeffs* a) { return a ? a->a.values().size() : 0; }

lp_status lp_coeffs_values(const lp_coeffs* a, double* out, size_t capacity) {
    return guarded([&] {
        need(a, "coefficients");
        need(out, "out");
        const auto v = a->a.values();
        if (capacity < v.size()) linproc::fail(linproc::ErrorCode::invalid_argument, "output buffer too small");
        for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    });
}

lp_status lp_partial_sums(const lp_coeffs* a, size_t m, double* out) {
    return guarded([&] {
        need(a, "coefficients");
        need(out, "out");
        const auto b = linproc::partial_sums(a->a, m);
        for (size_t j = 0; j <= m; ++j) out[j] = b[j];
    });
}

lp_status lp_hannan_sum(const lp_coeffs* a, double* value, int* lower_bound) {
    return guarded([&] {
        need(a, "coefficients");
        need(value, "value");
        const auto h = linproc::hannan_sum(a->a);
        *value = h.value;
        if (lower_bound) *lower_bound = h.lower_bound ? 1 : 0;
    });
}

lp_status lp_profile_create(const lp_coeffs* a, size_t n_max, size_t past_window, lp_profile** out) {
    return guarded([&] {
        need(a, "coefficients");
        need(out, "out");
        *out = new lp_profile{linproc::variance_profile(a->a, n_max, past_window)};
    });
}

void lp_profile_free(lp_profile* p) { delete p; }

size_t lp_profile_n_max(const lp_profile* p) { return p ? p->p.n_max() : 0; }

lp_status lp_profile_get(const lp_profile* p, size_t n, double* sigma_bar_sq, double* cond_exp_norm_sq,
                         double* sigma_sq) {
    return guarded([&] {
        need(p, "profile");
        if (n > p->p.n_max()) linproc::fail(linproc::ErrorCode::invalid_argument, "n beyond the profile range");
        if (sigma_bar_sq) *sigma_bar_sq = p->p.sigma_bar_sq[n];
        if (cond_exp_norm_sq) *cond_exp_norm_sq = p->p.cond_exp_norm_sq[n];
        if (sigma_sq) *sigma_sq = p->p.sigma_sq[n];
    });
}

lp_status lp_check_condition2(const lp_profile* p, size_t n_max, lp_condition2* out) {
    return guarded([&] {
        need(p, "profile");
        need(out, "out");
        const auto r = linproc::check_condition2(p->p, n_max);
        *out = {to_c(r.c), r.n, r.k, r.n_max, r.log_slope, r.bounded ? 1 : 0};
    });
}

lp_status lp_maxwell_woodroofe(const lp_profile* p, size_t n_max, const lp_cx_spec* spec, double* partial,
                               lp_extended* tail_bound) {
    return guarded([&] {
        need(p, "profile");
        need(partial, "partial");
        const auto mw = spec ? linproc::maxwell_woodroofe_sum(p->p, n_max, spec->spec)
                             : linproc::maxwell_woodroofe_sum(p->p, n_max);
        *partial = mw.partial;
        if (tail_bound) *tail_bound = to_c(mw.tail_bound);
    });
}

lp_status lp_gamma_schedule(size_t K, double* raw, double* normalized) {
    return guarded([&] {
        const auto g = linproc::gamma_schedule(K);
        for (size_t k = 0; k < K; ++k) {
            if (raw) raw[k] = g.raw[k];
            if (normalized) normalized[k] = g.normalized[k];
        }
    });
}

lp_status lp_cx_create(const uint64_t* V, size_t K, const uint64_t* N, size_t J, const double* kappa,
                       const size_t* scheduled, size_t n_scheduled, int renormalize, lp_cx_spec** out) {
    return guarded([&] {
        need(out, "out");
        if (K > 0) need(V, "V");
        if (J > 0) need(N, "N");
        if (n_scheduled > 0) need(scheduled, "scheduled");
        linproc::CounterexampleParams params;
        params.V.assign(V, V + K);
        params.N.assign(N, N + J);
        if (kappa) params.kappa.assign(kappa, kappa + J);
        if (scheduled) params.scheduled.assign(scheduled, scheduled + n_scheduled);
        params.renormalize = renormalize != 0;
        *out = new lp_cx_spec{linproc::make_counterexample(params)};
    });
}

void lp_cx_free(lp_cx_spec* spec) { delete spec; }

lp_status lp_cx_coefficients(const lp_cx_spec* spec, lp_coeffs** out) {
    return guarded([&] {
        need(spec, "spec");
        need(out, "out");
        *out = new lp_coeffs{linproc::coefficients_of_f(spec->spec)};
    });
}

lp_status lp_cx_innovation(const lp_cx_spec* spec, double* d, double* weights, uint64_t* heights) {
    return guarded([&] {
        need(spec, "spec");
        const auto inn = linproc::innovation_spec(spec->spec);
        if (d) *d = inn.d;
        for (size_t k = 0; k < inn.K; ++k) {
            if (weights) weights[k] = inn.weights[k];
            if (heights) heights[k] = inn.tower_heights[k];
        }
    });
}

lp_status lp_cx_validate(const lp_cx_spec* spec, int* pass, size_t* failed) {
    return guarded([&] {
        need(spec, "spec");
        need(pass, "pass");
        std::uint64_t top = 1;
        for (auto n : spec->spec.N) top = std::max<std::uint64_t>(top, 4 * n);
        const auto profile = linproc::variance_profile(linproc::coefficients_of_f(spec->spec), top);
        const auto report = linproc::validate_schedule(spec->spec, profile);
        size_t bad = 0;
        for (const auto& c : report.checks) bad += c.pass ? 0 : 1;
        *pass = bad == 0 ? 1 : 0;
        if (failed) *failed = bad;
    });
}

lp_status lp_cx_mw_certificate(const lp_cx_spec* spec, double* value) {
    return guarded([&] {
        need(spec, "spec");
        need(value, "value");
        *value = linproc::mw_certificate(spec->spec);
    });
}

lp_status lp_run(const lp_run_options* options, lp_run_result** out) {
    return guarded([&] {
        need(options, "options");
        need(out, "out");
        need(options->command, "command");
        linproc::RunRequest req;
        req.command = options->command;
        if (options->spec_path) req.spec_path = options->spec_path;
        if (options->out_dir) req.out_dir = options->out_dir;
        if (options->has_seed) req.seed = options->seed;
        if (options->n_overrides > 0) need(options->overrides, "overrides");
        for (size_t i = 0; i < options->n_overrides; ++i) {
            need(options->overrides[i], "override");
            req.overrides.emplace_back(options->overrides[i]);
        }
        req.threads = options->threads == 0 ? 1 : options->threads;
        *out = new lp_run_result{linproc::run(req)};
    });
}

int lp_run_result_pass(const lp_run_result* r) { return r && r->result.pass ? 1 : 0; }

const char* lp_run_result_summary(const lp_run_result* r) { return r ? r->result.summary.c_str() : ""; }

size_t lp_run_result_artifact_count(const lp_run_result* r) { return r ? r->result.artifacts.size() : 0; }

const char* lp_run_result_artifact_name(const lp_run_result* r, size_t i) {
    return r && i < r->result.artifacts.size() ? r->result.artifacts[i].first.c_str() : nullptr;
}

const char* lp_run_result_artifact_contents(const lp_run_result* r, size_t i) {
    return r && i < r->result.artifacts.size() ? r->result.artifacts[i].second.c_str() : nullptr;
}

void lp_run_result_free(lp_run_result* r) { delete r; }

} // extern "C"
