#include "core/variance.hpp"

#include "core/error.hpp"
#include "core/numeric.hpp"

#include <algorithm>
#include <string>

namespace linproc {

VarianceProfile variance_profile(const CoefficientSeq& a, std::size_t n_max, std::size_t past_window) {
    const std::size_t L = a.last_index();
    if (a.exact() && past_window < L)
        fail(ErrorCode::invalid_argument,
             "past_window " + std::to_string(past_window) + " is shorter than the exact support length " +
                 std::to_string(L) + "; E(S_n|F_0) would be silently truncated");

    // b_j is constant (= sum of all stored a_i) for j > L.
    const std::size_t m_top = std::min(past_window, L);
    const auto b = partial_sums(a, n_max + m_top + 1);

    VarianceProfile p;
    p.past_window = past_window;
    p.b.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
    p.sigma_bar_sq.assign(n_max + 1, 0.0);
    p.cond_exp_norm_sq.assign(n_max + 1, 0.0);
    p.sigma_sq.assign(n_max + 1, 0.0);

    CompensatedSum bar;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n >= 2) bar.add(b[n - 1] * b[n - 1]);
        p.sigma_bar_sq[n] = bar.value();
    }

    // For n > L every b_{n+m} equals the total, so the past part is constant.
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > L + 1) {
            p.cond_exp_norm_sq[n] = p.cond_exp_norm_sq[n - 1];
            continue;
        }
        CompensatedSum s;
        for (std::size_t m = 0; m <= m_top; ++m) {
            const double d = b[n + m] - b[m];
            s.add(d * d);
        }
        p.cond_exp_norm_sq[n] = s.value();
    }

    for (std::size_t n = 1; n <= n_max; ++n) p.sigma_sq[n] = p.sigma_bar_sq[n] + p.cond_exp_norm_sq[n];
    return p;
}

VarianceProfile variance_profile(const CoefficientSeq& a, std::size_t n_max) {
    return variance_profile(a, n_max, a.last_index());
}

} // namespace linproc
