#include <catch_amalgamated.hpp>

#include "linproc.h"

#include <cmath>
#include <string>
#include <vector>

TEST_CASE("version and status names") {
    CHECK(std::string(lp_version()).rfind("v0.3.0", 0) == 0);
    CHECK(std::string(lp_status_name(LP_OK)) == "ok");
    CHECK(std::string(lp_status_name(LP_ERR_DEGENERATE)) == "degenerate");
}

TEST_CASE("coefficients and partial sums through the C interface") {
    const double a[] = {1.0, -0.5, 0.25};
    lp_coeffs* c = nullptr;
    REQUIRE(lp_coeffs_create(a, 3, 0.0, &c) == LP_OK);
    CHECK(lp_coeffs_length(c) == 3);
    double b[5];
    REQUIRE(lp_partial_sums(c, 4, b) == LP_OK);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 1.0);
    CHECK(b[2] == 0.5);
    CHECK(b[3] == 0.75);
    CHECK(b[4] == 0.75);
    double h = 0.0;
    int lower = -1;
    REQUIRE(lp_hannan_sum(c, &h, &lower) == LP_OK);
    CHECK(h == 1.75);
    CHECK(lower == 0);
    double small[2];
    CHECK(lp_coeffs_values(c, small, 2) == LP_ERR_INVALID_ARGUMENT);
    lp_coeffs_free(c);
}

TEST_CASE("errors become status codes") {
    lp_coeffs* c = nullptr;
    CHECK(lp_coeffs_create(nullptr, 3, 0.0, &c) == LP_ERR_INVALID_ARGUMENT);
    CHECK(c == nullptr);
    CHECK(std::string(lp_last_error()).size() > 0);
    CHECK(lp_coeffs_read_csv("/nonexistent/a.csv", &c) == LP_ERR_IO);

    const double zero[] = {1.0, -1.0};
    REQUIRE(lp_coeffs_create(zero, 2, 0.0, &c) == LP_OK);
    lp_profile* p = nullptr;
    REQUIRE(lp_profile_create(c, 10, 1, &p) == LP_OK);
    lp_condition2 r;
    CHECK(lp_check_condition2(p, 10, &r) == LP_OK);
    lp_profile_free(p);
    lp_coeffs_free(c);

    const double none[] = {0.0};
    REQUIRE(lp_coeffs_create(none, 1, 0.0, &c) == LP_OK);
    REQUIRE(lp_profile_create(c, 10, 0, &p) == LP_OK);
    CHECK(lp_check_condition2(p, 10, &r) == LP_ERR_DEGENERATE);
    CHECK(std::string(lp_last_error()).find("degenerate") != std::string::npos);
    lp_profile_free(p);
    lp_coeffs_free(c);
    lp_coeffs_free(nullptr);
}

TEST_CASE("iid profile and condition through the C interface") {
    const double one[] = {1.0};
    lp_coeffs* c = nullptr;
    REQUIRE(lp_coeffs_create(one, 1, 0.0, &c) == LP_OK);
    lp_profile* p = nullptr;
    REQUIRE(lp_profile_create(c, 100, 0, &p) == LP_OK);
    CHECK(lp_profile_n_max(p) == 100);
    double sb = 0, ce = 0, s = 0;
    REQUIRE(lp_profile_get(p, 50, &sb, &ce, &s) == LP_OK);
    CHECK(sb == 49.0);
    CHECK(ce == 1.0);
    CHECK(s == 50.0);
    lp_condition2 r;
    REQUIRE(lp_check_condition2(p, 100, &r) == LP_OK);
    CHECK(r.c.kind == LP_FINITE);
    CHECK(r.c.value == 2.0);
    CHECK(r.n == 2);
    CHECK(r.k == 1);
    double partial = 0;
    lp_extended tail;
    REQUIRE(lp_maxwell_woodroofe(p, 100, nullptr, &partial, &tail) == LP_OK);
    CHECK(tail.kind == LP_UNKNOWN);
    CHECK(partial > 2.0);
    lp_profile_free(p);
    lp_coeffs_free(c);
}

TEST_CASE("counterexample through the C interface") {
    const uint64_t V[] = {4, 64, 4096};
    const uint64_t N[] = {64, 256};
    const double kappa[] = {2, 4};
    const size_t sched[] = {1};
    lp_cx_spec* spec = nullptr;
    REQUIRE(lp_cx_create(V, 3, N, 2, kappa, sched, 1, 1, &spec) == LP_OK);
    int pass = 0;
    size_t failed = 99;
    REQUIRE(lp_cx_validate(spec, &pass, &failed) == LP_OK);
    CHECK(pass == 1);
    CHECK(failed == 0);
    double d = 0, w[2];
    uint64_t h[2];
    REQUIRE(lp_cx_innovation(spec, &d, w, h) == LP_OK);
    CHECK(h[0] == 256);
    CHECK(h[1] == 1024);
    CHECK(std::fabs(w[0] * w[0] / 256 + w[1] * w[1] / 1024 - 1.0) < 1e-12);
    lp_coeffs* a = nullptr;
    REQUIRE(lp_cx_coefficients(spec, &a) == LP_OK);
    CHECK(lp_coeffs_length(a) == 4097);
    double hs = 0;
    int lower = 0;
    REQUIRE(lp_hannan_sum(a, &hs, &lower) == LP_OK);
    CHECK(std::fabs(hs - 2.0) < 1e-12);
    double cert = 0;
    REQUIRE(lp_cx_mw_certificate(spec, &cert) == LP_OK);
    CHECK(cert > 2.612);
    lp_coeffs_free(a);
    lp_cx_free(spec);

    const uint64_t badV[] = {4, 6};
    CHECK(lp_cx_create(badV, 2, N, 2, nullptr, nullptr, 0, 1, &spec) == LP_ERR_INVALID_ARGUMENT);
    double g[3];
    REQUIRE(lp_gamma_schedule(3, nullptr, g) == LP_OK);
    CHECK(std::fabs(g[0] + g[1] + g[2] - 1.0) < 1e-15);
}

TEST_CASE("running a command through the C interface") {
    const char* overrides[] = {"coefficients=1", "n=10"};
    lp_run_options opt{};
    opt.command = "simulate";
    opt.seed = 4;
    opt.has_seed = 1;
    opt.overrides = overrides;
    opt.n_overrides = 2;
    opt.threads = 1;
    lp_run_result* r = nullptr;
    REQUIRE(lp_run(&opt, &r) == LP_OK);
    CHECK(lp_run_result_pass(r) == 1);
    bool found = false;
    for (size_t i = 0; i < lp_run_result_artifact_count(r); ++i)
        if (std::string(lp_run_result_artifact_name(r, i)) == "path.csv") {
            found = true;
            CHECK(std::string(lp_run_result_artifact_contents(r, i)).find("seed=4") != std::string::npos);
        }
    CHECK(found);
    CHECK(lp_run_result_artifact_name(r, 1000) == nullptr);
    lp_run_result_free(r);

    opt.command = "nonsense";
    r = nullptr;
    CHECK(lp_run(&opt, &r) == LP_ERR_INVALID_ARGUMENT);
    CHECK(r == nullptr);
}
