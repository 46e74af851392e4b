#pragma once

// Deliberately naive reference computations. Nothing here shares code
// paths with the library beyond innovation_at, which defines the process.

#include "core/coefficients.hpp"
#include "core/sampler.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

inline double coef(const std::vector<double>& a, long i) {
    return i >= 0 && i < static_cast<long>(a.size()) ? a[static_cast<std::size_t>(i)] : 0.0;
}

/// b_j by summing a_0..a_{j-1} from scratch for every j.
inline std::vector<double> prefix(const std::vector<double>& a, std::size_t m) {
    std::vector<double> b(m + 1, 0.0);
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t i = 0; i < j; ++i) b[j] += coef(a, static_cast<long>(i));
    return b;
}

/// sum_{k=1}^{n-1} b_{n-k}^2
inline double sigma_bar_sq(const std::vector<double>& a, std::size_t n) {
    const auto b = prefix(a, n);
    double s = 0.0;
    for (std::size_t k = 1; k < n; ++k) s += b[n - k] * b[n - k];
    return s;
}

/// sum over t <= 0 of (coefficient of e_t in S_n)^2, read off the literal expansion
inline double cond_exp_sq(const std::vector<double>& a, std::size_t n) {
    const long L = static_cast<long>(a.size()) - 1;
    double s = 0.0;
    for (long t = -L; t <= 0; ++t) {
        double c = 0.0;
        for (long j = 0; j < static_cast<long>(n); ++j) c += coef(a, j - t);
        s += c * c;
    }
    return s;
}

/// S_1..S_N with f∘T^j = sum_i a_i e_{j-i} evaluated term by term. With
/// zero_future the innovations at t >= 1 are replaced by their conditional
/// mean 0, which turns S_N into E(S_N | F_0).
inline std::vector<double> path(const linproc::LinearProcess& p, const linproc::OmegaState& omega, std::size_t N,
                                const linproc::SignStream& future, bool zero_future = false) {
    const auto a = p.coefficients.values();
    std::vector<double> s;
    double acc = 0.0;
    for (long j = 0; j < static_cast<long>(N); ++j) {
        double x = 0.0;
        for (long i = 0; i < static_cast<long>(a.size()); ++i) {
            const long t = j - i;
            if (zero_future && t >= 1) continue;
            x += a[static_cast<std::size_t>(i)] * linproc::innovation_at(p.innovations, omega, t, future);
        }
        acc += x;
        s.push_back(acc);
    }
    return s;
}

/// KS distance by evaluating the empirical distribution function with a
/// full count at each sample point and just left of it.
inline double ks_quadratic(const std::vector<double>& x) {
    const double m = static_cast<double>(x.size());
    double d = 0.0;
    for (double v : x) {
        std::size_t le = 0, lt = 0;
        for (double u : x) {
            le += u <= v;
            lt += u < v;
        }
        const double phi = 0.5 * std::erfc(-v / std::sqrt(2.0));
        d = std::max({d, static_cast<double>(le) / m - phi, phi - static_cast<double>(lt) / m});
    }
    return d;
}

/// gamma_k = 2/((k+1)(k+2))
inline double gamma_closed(std::size_t k) {
    return 2.0 / (static_cast<double>(k + 1) * static_cast<double>(k + 2));
}

inline std::vector<double> random_coefficients(std::mt19937_64& gen, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_real_distribution<double> val(-1.5, 1.5);
    std::vector<double> a(len(gen));
    for (auto& x : a) x = val(gen);
    // repeated values exercise the run-length kernel
    if (a.size() > 3) a[2] = a[1];
    return a;
}

} // namespace oracle
