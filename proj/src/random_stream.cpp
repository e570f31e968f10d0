#include "pqt/random_stream.hpp"

#include <cmath>
#include <numbers>

namespace pqt {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t index) {
    // Mix the counter into the seed before state expansion so distinct
    // indices land in unrelated regions of the state space.
    std::uint64_t x = master_seed;
    std::uint64_t mixed = splitmix64(x) ^ (index * 0xd6e8feb86659fd93ULL);
    for (int i = 0; i < 4; ++i) s_[i] = splitmix64(mixed);
}

std::uint64_t RandomStream::next_u64() {
    // xoshiro256**
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (have_cached_normal_) {
        have_cached_normal_ = false;
        return cached_normal_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    have_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
    // Rejection to avoid modulo bias.
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return RandomStream(master_seed, index);
}

}  // namespace pqt
