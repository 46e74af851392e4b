#include <catch_amalgamated.hpp>

#include "core/counterexample.hpp"
#include "core/error.hpp"
#include "core/numeric.hpp"
#include "oracles.hpp"

using namespace linproc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("raw gamma matches the closed form") {
    const auto raw = gamma_raw(10'000);
    CHECK_THAT(raw[0], WithinAbs(1.0 / 3, 1e-16));
    CHECK_THAT(raw[1], WithinAbs(1.0 / 6, 1e-16));
    CHECK_THAT(raw[2], WithinAbs(1.0 / 10, 1e-16));
    for (std::size_t k = 1; k <= raw.size(); ++k) REQUIRE_THAT(raw[k - 1], WithinAbs(oracle::gamma_closed(k), 1e-14));
}

TEST_CASE("raw gamma telescopes") {
    const auto raw = gamma_raw(10'000);
    double s = 0.0;
    for (std::size_t k = 1; k <= raw.size(); ++k) {
        // 1 - sum_{j<k} gamma_j = (k+2) gamma_k
        REQUIRE_THAT((static_cast<double>(k) + 2) * raw[k - 1], WithinAbs(1.0 - s, 1e-12));
        s += raw[k - 1];
        REQUIRE_THAT(s, WithinAbs(1.0 - 2.0 / (static_cast<double>(k) + 2), 1e-12));
    }
    CHECK_THAT(raw[0] + raw[1] + raw[2], WithinAbs(0.6, 1e-15));
}

TEST_CASE("renormalized gamma sums to one") {
    const auto g2 = gamma_schedule(2);
    CHECK_THAT(g2.normalized[0], WithinAbs(2.0 / 3, 1e-15));
    CHECK_THAT(g2.normalized[1], WithinAbs(1.0 / 3, 1e-15));
    for (std::size_t K : {1u, 3u, 17u, 500u}) {
        const auto g = gamma_schedule(K);
        CompensatedSum s;
        for (double x : g.normalized) s.add(x);
        CHECK_THAT(s.value(), WithinAbs(1.0, 1e-14));
    }
    REQUIRE_THROWS_AS(gamma_schedule(0), Error);
}

TEST_CASE("coefficients of f for K = 2") {
    const auto spec = make_counterexample({{4, 16}, {}, {}, {}, true});
    const auto a = coefficients_of_f(spec);
    REQUIRE(a.last_index() == 16);
    CHECK(a[0] == 1.0);
    for (std::size_t i = 1; i <= 4; ++i) CHECK_THAT(a[i], WithinAbs(-3.0 / 16, 1e-16));
    for (std::size_t i = 5; i <= 16; ++i) CHECK_THAT(a[i], WithinAbs(-1.0 / 48, 1e-16));
    CHECK(a[17] == 0.0);
    double l1 = 0.0;
    for (std::size_t i = 1; i <= 16; ++i) l1 += std::fabs(a[i]);
    CHECK_THAT(l1, WithinAbs(1.0, 1e-12));
}

TEST_CASE("coefficients of f for K = 1") {
    const auto a = coefficients_of_f(make_counterexample({{4}, {}, {}, {}, true}));
    for (std::size_t i = 1; i <= 4; ++i) CHECK(a[i] == -0.25);
}

TEST_CASE("b vanishes past the last block and stays in [0, 1]") {
    const auto spec = make_counterexample({{3, 10, 40, 200}, {}, {}, {}, true});
    const auto a = coefficients_of_f(spec);
    const auto b = partial_sums(a, 250);
    CHECK_THAT(b[201], WithinAbs(0.0, 1e-12));
    for (std::size_t j = 1; j < b.size(); ++j) {
        CHECK(b[j] <= 1.0 + 1e-15);
        CHECK(b[j] >= -1e-12);
        if (j >= 2) CHECK(b[j] <= b[j - 1] + 1e-15);
    }
    const auto p = variance_profile(a, 250);
    for (std::size_t n = 2; n <= 250; ++n) CHECK(p.sigma_bar_sq[n] > 0.0);
}

TEST_CASE("raw mode keeps the product weights") {
    const auto spec = make_counterexample({{4, 16}, {}, {}, {}, false});
    CHECK_THAT(spec.gamma[0], WithinAbs(1.0 / 3, 1e-16));
    const auto a = coefficients_of_f(spec);
    CHECK_THAT(a[1], WithinAbs(-(1.0 / 12 + 1.0 / 96), 1e-16));
}

TEST_CASE("construction rejects structural violations") {
    REQUIRE_THROWS_AS(make_counterexample({{}, {}, {}, {}, true}), Error);
    REQUIRE_THROWS_AS(make_counterexample({{4, 7}, {}, {}, {}, true}), Error);
    REQUIRE_THROWS_AS(make_counterexample({{4, 16}, {8, 32}, {2}, {}, true}), Error);
    REQUIRE_THROWS_AS(make_counterexample({{4, 16}, {8, 32}, {}, {3}, true}), Error);
    REQUIRE_THROWS_AS(make_counterexample({{4, 16}, {0}, {}, {}, true}), Error);
}

TEST_CASE("default kappa and schedule") {
    const auto spec = make_counterexample({{4, 16}, {8, 32, 128}, {}, {}, true});
    CHECK(spec.kappa == std::vector<double>{2, 4, 8});
    CHECK(spec.scheduled == std::vector<std::size_t>{1, 3});
    CHECK(spec.block_end(1) == 32);
    CHECK(spec.block_end(3) == 512);
}

TEST_CASE("innovation normalizer") {
    const auto one = innovation_spec(make_counterexample({{4}, {16}, {}, {}, true}));
    CHECK(one.d == 2.0);
    CHECK(one.weights[0] == 8.0);
    CHECK(one.tower_heights[0] == 64);
    const auto two = innovation_spec(make_counterexample({{4}, {16, 64}, {}, {}, true}));
    CHECK_THAT(two.d, WithinRel(2.0 / std::sqrt(1.125), 1e-15));

    double zeta3 = 0.0;
    for (int k = 1; k <= 200000; ++k) zeta3 += std::pow(k, -3.0);
    CHECK_THAT(2.0 / std::sqrt(zeta3), WithinAbs(1.824179, 1e-6));

    for (std::size_t J : {1u, 2u, 5u, 9u}) {
        std::vector<std::uint64_t> N;
        for (std::size_t k = 0; k < J; ++k) N.push_back(std::uint64_t{16} << (2 * k));
        CHECK_THAT(innovation_spec(make_counterexample({{4}, N, {}, {}, true})).norm_sq(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("schedule validation on the desk-scale demo") {
    const auto spec = make_counterexample({{4, 64, 4096}, {64, 256}, {2, 4}, {1}, true});
    const auto p = variance_profile(coefficients_of_f(spec), 1024);
    const auto r = validate_schedule(spec, p);
    CHECK(r.pass());
    const auto* mass = r.find("tower_mass");
    REQUIRE(mass);
    CHECK_THAT(mass->lhs, WithinAbs(1.0 / 256 + 1.0 / 1024, 1e-15));
    const auto* gap = r.find("gap_1");
    REQUIRE(gap);
    CHECK_THAT(gap->lhs, WithinRel(2.0 * p.sigma(64), 1e-15));
    CHECK(gap->rhs == 8.0);
    CHECK(gap->margin > 0.0);
    REQUIRE(r.divergence.size() == 3);
    // sqrt(V_k)(k+4) gamma_{k+2} with raw gamma
    CHECK_THAT(r.divergence[0], WithinRel(2.0 * 5 * oracle::gamma_closed(3), 1e-12));
    REQUIRE_THROWS_AS(validate_schedule(spec, variance_profile(coefficients_of_f(spec), 512)), Error);
}

TEST_CASE("schedule validation names the failing constraint") {
    const auto spec = make_counterexample({{4, 64, 4096}, {64, 200}, {2, 4}, {1}, true});
    const auto r = validate_schedule(spec, variance_profile(coefficients_of_f(spec), 1024));
    CHECK_FALSE(r.pass());
    REQUIRE(r.find("N_step_1"));
    CHECK_FALSE(r.find("N_step_1")->pass);

    const auto tight = make_counterexample({{4, 64, 4096}, {64, 256}, {4, 4}, {1}, true});
    const auto r2 = validate_schedule(tight, variance_profile(coefficients_of_f(tight), 1024));
    CHECK_FALSE(r2.find("gap_1")->pass);
}

TEST_CASE("component bounds") {
    const auto spec = make_counterexample({{4, 16}, {}, {}, {}, true});
    const auto bounds = mw_component_bounds(spec);
    REQUIRE(bounds.size() == 2);
    const double s4 = 1 + 1 / std::sqrt(2.0) + 1 / std::sqrt(3.0) + 0.5;
    CHECK_THAT(s4, WithinAbs(2.78446, 1e-5));
    double tail = 0.0;
    for (int n = 2000000; n > 4; --n) tail += std::pow(n, -1.5);
    tail += 2.0 / std::sqrt(2000000.0);
    CHECK_THAT(bounds[0].C, WithinRel(std::sqrt(2.0 / 4) * s4 + 2.0 * tail, 1e-6));
    CHECK(bounds[0].bound == bounds[0].C * spec.gamma[0]);

    // linear in gamma with V fixed
    const auto raw = make_counterexample({{4, 16}, {}, {}, {}, false});
    const auto rb = mw_component_bounds(raw);
    CHECK_THAT(rb[0].bound / bounds[0].bound, WithinRel(raw.gamma[0] / spec.gamma[0], 1e-14));

    const auto p = variance_profile(coefficients_of_f(spec), 100000);
    const auto cert = mw_certificate(spec);
    double partial = 0.0;
    for (std::size_t n = 1; n <= 100000; ++n) partial += p.cond_exp_norm(n) / std::pow(static_cast<double>(n), 1.5);
    CHECK(partial <= cert);
}
