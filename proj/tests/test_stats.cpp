#include <catch_amalgamated.hpp>

#include "core/error.hpp"
#include "core/numeric.hpp"
#include "core/stats.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace linproc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normal cdf reference values") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK_THAT(normal_cdf(1.0), WithinAbs(0.8413447460685429, 1e-15));
    CHECK_THAT(normal_cdf(-1.96), WithinAbs(0.024997895148220435, 1e-15));
    // far tail keeps relative accuracy
    CHECK_THAT(normal_cdf(-30.0), WithinRel(4.906713927148187e-198, 1e-12));
}

TEST_CASE("KS statistic matches the quadratic definition") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> coarse(-3, 3);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(1 + gen() % 300);
        for (auto& v : x) v = rep % 2 ? z(gen) : 0.5 * coarse(gen);  // odd reps have heavy ties
        CHECK_THAT(ks_statistic(x), WithinAbs(oracle::ks_quadratic(x), 1e-15));
        auto sorted = x;
        std::sort(sorted.begin(), sorted.end());
        CHECK(ks_statistic_sorted(sorted) == ks_statistic(x));
    }
}

TEST_CASE("KS of a point mass at zero") {
    std::vector<double> zeros(1000, 0.0);
    CHECK_THAT(ks_statistic(zeros), WithinAbs(0.5, 1e-15));
    CHECK_THROWS_AS(ks_statistic(std::vector<double>{}), Error);
}

TEST_CASE("exceedance and binomial standard error") {
    const std::vector<double> x{-3, -1, 0, 1, 2, 2.5};
    CHECK(exceedance(x, 2.0) == 3.0 / 6.0);
    CHECK(exceedance(x, 0.0) == 1.0);
    CHECK_THAT(binomial_se(0.25, 10000), WithinAbs(std::sqrt(0.25 * 0.75 / 10000), 1e-18));
}

TEST_CASE("online moments merge like a single pass") {
    std::mt19937_64 gen(9);
    std::exponential_distribution<double> ex(1.0);
    OnlineMoments whole, left, right;
    std::vector<double> xs;
    for (int i = 0; i < 5000; ++i) {
        const double v = ex(gen);
        xs.push_back(v);
        whole.add(v);
        (i < 1700 ? left : right).add(v);
    }
    left.merge(right);
    CHECK(left.count() == whole.count());
    CHECK_THAT(left.mean(), WithinRel(whole.mean(), 1e-12));
    CHECK_THAT(left.variance(), WithinRel(whole.variance(), 1e-12));
    CHECK_THAT(left.skewness(), WithinRel(whole.skewness(), 1e-10));

    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= xs.size();
    double m2 = 0.0;
    for (double v : xs) m2 += (v - mean) * (v - mean);
    CHECK_THAT(whole.variance(), WithinRel(m2 / (xs.size() - 1), 1e-10));
    // exponential skewness is 2
    CHECK(std::fabs(whole.skewness() - 2.0) < 0.5);

    OnlineMoments empty;
    empty.merge(whole);
    CHECK(empty.mean() == whole.mean());
}

TEST_CASE("median") {
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 3, 2}) == 2.5);
    CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("log-log slope recovers a power law") {
    std::vector<double> x, y;
    for (double n = 2; n < 5000; n *= 1.3) {
        x.push_back(n);
        y.push_back(3.0 * std::pow(n, 0.75));
    }
    CHECK_THAT(log_log_slope(x, y), WithinAbs(0.75, 1e-12));
}

TEST_CASE("compensated sum") {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1'000'000; ++i) s.add(1e-16);
    CHECK_THAT(s.value(), WithinAbs(1.0 + 1e-10, 1e-22));
}
