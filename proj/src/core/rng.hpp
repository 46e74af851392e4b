#pragma once

#include <cstdint>
#include <initializer_list>

namespace linproc {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable derivation of a child seed from a root and a path of indices.
/// Independent of evaluation order, so parallel and serial runs agree.
std::uint64_t split_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept;

// Counter-based source of future innovation randomness: every (k, t) has
// its own value, computed on demand. Evaluation order never matters.
class SignStream {
public:
    explicit SignStream(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t key() const noexcept { return key_; }

    /// +1 or -1 with probability 1/2, independent across (k, t).
    double sign(std::uint64_t k, std::int64_t t) const noexcept;

    /// The 64 signs of times 64 j .. 64 j + 63 as bits (1 means +1).
    std::uint64_t sign_word(std::uint64_t k, std::int64_t j) const noexcept;

    /// Uniform on (0, 1), 53-bit resolution, never 0.
    double uniform(std::uint64_t k, std::int64_t t, std::uint64_t lane = 0) const noexcept;

    /// Standard normal via Box-Muller on two lanes.
    double gaussian(std::uint64_t k, std::int64_t t) const noexcept;

private:
    std::uint64_t key_;
};

} // namespace linproc
