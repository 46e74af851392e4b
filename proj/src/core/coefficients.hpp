#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace linproc {

/// Causal coefficients a_0..a_L of f = sum_i a_i e∘T^{-i}.
///
/// `tail_l2` is a certified bound on sum_{i>L} a_i^2. Zero means the support
/// is exactly {0..L}; every sampler and exact variance computation requires
/// that mode.
class CoefficientSeq {
public:
    CoefficientSeq() : values_{0.0} {}
    explicit CoefficientSeq(std::vector<double> values, double tail_l2 = 0.0);

    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return i < values_.size() ? values_[i] : 0.0; }
    double tail_l2() const noexcept { return tail_l2_; }
    bool exact() const noexcept { return tail_l2_ == 0.0; }

    /// Largest stored index L.
    std::size_t last_index() const noexcept { return values_.size() - 1; }

    /// sum_{i<=L} a_i^2 + tail_l2
    double l2_norm_sq() const;

    bool operator==(const CoefficientSeq&) const = default;

private:
    std::vector<double> values_;
    double tail_l2_ = 0.0;
};

/// b_0..b_m with b_0 = 0 and b_j = sum_{i<j} a_i.
std::vector<double> partial_sums(const CoefficientSeq& a, std::size_t m);

/// ||P_0 U^i f||_2 = |a_i| for i = 0..L.
std::vector<double> projection_norms(const CoefficientSeq& a);

/// Maximal runs of equal consecutive coefficients; the sampler's convolution
/// kernel costs O(runs) per innovation atom.
struct CoefficientRun {
    std::size_t first;
    std::size_t last;
    double value;
};
std::vector<CoefficientRun> coefficient_runs(const CoefficientSeq& a);

/// CSV interchange: optional `#` comment lines, header `index,a_i`, then one
/// row per index 0..L in order. A `# tail_l2=<x>` comment restores the bound.
void write_coefficients_csv(const CoefficientSeq& a, const std::string& path, const std::string& header_comment);
std::string coefficients_csv(const CoefficientSeq& a, const std::string& header_comment);
CoefficientSeq read_coefficients_csv(const std::string& path);
CoefficientSeq parse_coefficients_csv(const std::string& text);

} // namespace linproc
