#include "core/rng.hpp"

#include <cmath>
#include <numbers>

namespace linproc {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t split_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(root);
    for (auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

namespace {

std::uint64_t block(std::uint64_t key, std::uint64_t k, std::int64_t t, std::uint64_t lane) noexcept {
    return mix64(mix64(key ^ mix64(k)) ^ mix64(static_cast<std::uint64_t>(t) + (lane << 56)));
}

} // namespace

std::uint64_t SignStream::sign_word(std::uint64_t k, std::int64_t j) const noexcept {
    return block(key_, k, j, 0xff);
}

double SignStream::sign(std::uint64_t k, std::int64_t t) const noexcept {
    // 64 signs per hash: bit (t mod 64) of the word for block t >> 6
    const std::uint64_t word = sign_word(k, t >> 6);
    return ((word >> (static_cast<std::uint64_t>(t) & 63)) & 1) ? 1.0 : -1.0;
}

double SignStream::uniform(std::uint64_t k, std::int64_t t, std::uint64_t lane) const noexcept {
    const std::uint64_t word = block(key_, k, t, lane);
    return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

double SignStream::gaussian(std::uint64_t k, std::int64_t t) const noexcept {
    const double u1 = uniform(k, t, 1);
    const double u2 = uniform(k, t, 2);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace linproc
