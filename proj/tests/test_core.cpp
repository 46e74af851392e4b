#include <catch_amalgamated.hpp>

#include "core/coefficients.hpp"
#include "core/counterexample.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/variance.hpp"
#include "oracles.hpp"

#include <filesystem>
#include <random>

using namespace linproc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

CounterexampleSpec k2_spec() { return make_counterexample({{4, 16}, {}, {}, {}, true}); }

} // namespace

TEST_CASE("partial sums of a delta are constant") {
    const auto b = partial_sums(CoefficientSeq({1.0}), 3);
    REQUIRE(b == std::vector<double>{0, 1, 1, 1});
}

TEST_CASE("partial sums cancel for a coboundary") {
    const auto b = partial_sums(CoefficientSeq({1.0, -1.0}), 4);
    REQUIRE(b == std::vector<double>{0, 1, 0, 0, 0});
}

TEST_CASE("partial sums of the two block counterexample") {
    const auto a = coefficients_of_f(k2_spec());
    const auto b = partial_sums(a, 20);
    CHECK_THAT(b[2], WithinAbs(13.0 / 16, 1e-15));
    CHECK_THAT(b[5], WithinAbs(0.25, 1e-15));
    CHECK_THAT(b[17], WithinAbs(0.0, 1e-15));

    // closed form b_j = sum_k g_k max(0, 1 - (j-1)/V_k), j >= 1
    const std::vector<double> g = {2.0 / 3, 1.0 / 3};
    const std::vector<double> V = {4, 16};
    for (std::size_t j = 1; j <= 20; ++j) {
        double closed = 0.0;
        for (std::size_t k = 0; k < 2; ++k) closed += g[k] * std::max(0.0, 1.0 - (static_cast<double>(j) - 1) / V[k]);
        CHECK_THAT(b[j], WithinAbs(closed, 1e-14));
    }
}

TEST_CASE("partial sums agree with the from-scratch oracle") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 20; ++rep) {
        const auto v = oracle::random_coefficients(gen, 12);
        const auto b = partial_sums(CoefficientSeq(v), 30);
        const auto ref = oracle::prefix(v, 30);
        REQUIRE(b[0] == 0.0);
        for (std::size_t j = 1; j <= 30; ++j) {
            CHECK_THAT(b[j], WithinAbs(ref[j], 1e-12));
            CHECK_THAT(b[j] - b[j - 1], WithinAbs(oracle::coef(v, static_cast<long>(j) - 1), 1e-12));
        }
    }
}

TEST_CASE("coefficient sequences reject bad input") {
    REQUIRE_THROWS_AS(CoefficientSeq({1.0, NAN}), Error);
    REQUIRE_THROWS_AS(CoefficientSeq({1.0}, -1.0), Error);
    REQUIRE(CoefficientSeq(std::vector<double>{}).last_index() == 0);
}

TEST_CASE("martingale case variance profile") {
    const auto p = variance_profile(CoefficientSeq({1.0}), 50);
    for (std::size_t n = 1; n <= 50; ++n) {
        CHECK(p.sigma_bar_sq[n] == static_cast<double>(n - 1));
        // e_0 is F_0-measurable and is the whole of E(S_n | F_0)
        CHECK(p.cond_exp_norm_sq[n] == 1.0);
        CHECK(p.sigma_sq[n] == static_cast<double>(n));
    }
    CHECK(p.sigma_bar_sq[1] == 0.0);
}

TEST_CASE("sigma bar of the two block counterexample at n = 5") {
    const auto p = variance_profile(coefficients_of_f(k2_spec()), 10);
    CHECK_THAT(p.sigma_bar_sq[5], WithinAbs(2.2421875, 1e-14));
}

TEST_CASE("variance profile rejects a short past window") {
    const auto a = coefficients_of_f(k2_spec());
    REQUIRE_THROWS_AS(variance_profile(a, 10, 15), Error);
    REQUIRE_NOTHROW(variance_profile(a, 10, 16));
    REQUIRE_NOTHROW(variance_profile(a, 10, 40));
}

TEST_CASE("variance profile matches the literal expansion") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 5; ++rep) {
        const auto v = oracle::random_coefficients(gen, 10);
        const auto p = variance_profile(CoefficientSeq(v), 64);
        for (std::size_t n = 1; n <= 64; ++n) {
            const double sb = oracle::sigma_bar_sq(v, n);
            const double ce = oracle::cond_exp_sq(v, n);
            CHECK_THAT(p.sigma_bar_sq[n], WithinRel(sb, 1e-10) || WithinAbs(sb, 1e-12));
            CHECK_THAT(p.cond_exp_norm_sq[n], WithinRel(ce, 1e-10) || WithinAbs(ce, 1e-12));
            CHECK_THAT(p.sigma_sq[n], WithinRel(sb + ce, 1e-10) || WithinAbs(sb + ce, 1e-12));
        }
    }
}

TEST_CASE("orthogonal decomposition holds exactly and entries are nonnegative") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 10; ++rep) {
        const auto p = variance_profile(CoefficientSeq(oracle::random_coefficients(gen, 20)), 200);
        for (std::size_t n = 1; n <= 200; ++n) {
            CHECK(p.sigma_sq[n] == p.sigma_bar_sq[n] + p.cond_exp_norm_sq[n]);
            CHECK(p.sigma_bar_sq[n] >= 0.0);
            CHECK(p.cond_exp_norm_sq[n] >= 0.0);
        }
    }
}

TEST_CASE("b is bounded by the absolute coefficient sum") {
    std::mt19937_64 gen(21);
    for (int rep = 0; rep < 20; ++rep) {
        const auto v = oracle::random_coefficients(gen, 15);
        double l1 = 0.0;
        for (double x : v) l1 += std::fabs(x);
        for (double b : partial_sums(CoefficientSeq(v), 40)) CHECK(std::fabs(b) <= l1 + 1e-12);
    }
}

TEST_CASE("sigma_n is nondecreasing for counterexample coefficients") {
    const auto spec = make_counterexample({{4, 64, 4096}, {64, 256}, {2, 4}, {1}, true});
    const auto p = variance_profile(coefficients_of_f(spec), 8192);
    for (std::size_t n = 1; n < 8192; ++n) CHECK(p.sigma(n) <= p.sigma(n + 1) * (1 + 1e-14));
}

TEST_CASE("projection norms are absolute coefficients") {
    CHECK(projection_norms(CoefficientSeq({1.0})) == std::vector<double>{1.0});
    CHECK(projection_norms(CoefficientSeq({0.6, -0.8})) == std::vector<double>{0.6, 0.8});
    CHECK_THAT(projection_norms(coefficients_of_f(k2_spec()))[1], WithinAbs(3.0 / 16, 1e-15));
}

TEST_CASE("coefficient runs cover the support") {
    const auto runs = coefficient_runs(coefficients_of_f(k2_spec()));
    REQUIRE(runs.size() == 3);
    CHECK(runs[0].first == 0);
    CHECK(runs[1].first == 1);
    CHECK(runs[1].last == 4);
    CHECK(runs[2].first == 5);
    CHECK(runs[2].last == 16);
}

TEST_CASE("coefficient CSV round trip is exact") {
    std::mt19937_64 gen(3);
    const CoefficientSeq a(oracle::random_coefficients(gen, 30), 0.125);
    const auto text = coefficients_csv(a, "round trip");
    const auto back = parse_coefficients_csv(text);
    REQUIRE(back == a);

    const auto path = (std::filesystem::temp_directory_path() / "linproc_coeffs_test.csv").string();
    write_coefficients_csv(a, path, "file");
    REQUIRE(read_coefficients_csv(path) == a);
    std::filesystem::remove(path);
}

TEST_CASE("coefficient CSV parsing is strict") {
    REQUIRE_THROWS_AS(parse_coefficients_csv("i,a\n0,1\n"), Error);
    REQUIRE_THROWS_AS(parse_coefficients_csv("index,a_i\n0,1\n2,1\n"), Error);
    REQUIRE_THROWS_AS(parse_coefficients_csv("index,a_i\n0,abc\n"), Error);
    REQUIRE_THROWS_AS(read_coefficients_csv("/nonexistent/linproc.csv"), Error);
    const auto a = parse_coefficients_csv("# note\nindex,a_i\n0,1\n1,-0.5\n");
    CHECK(a.values().size() == 2);
}

TEST_CASE("csv helpers") {
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::split_row("x,\"a,b\",\"q\"\"\"") == std::vector<std::string>{"x", "a,b", "q\""});
    CHECK(csv::parse_double(csv::format_double(0.1 + 0.2)) == 0.1 + 0.2);
    REQUIRE_THROWS_AS(csv::parse_uint("-3"), Error);
}
