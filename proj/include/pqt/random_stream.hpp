#pragma once

#include <cstdint>

namespace pqt {

/// Deterministic per-trajectory random stream. The generator state is a
/// pure function of (master_seed, index) via SplitMix64 expansion into
/// xoshiro256**, so streams are identical on every platform and
/// independent of scheduling.
class RandomStream {
  public:
    RandomStream(std::uint64_t master_seed, std::uint64_t index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();
    /// Standard normal (Box-Muller, internally cached pair).
    double normal();
    /// Uniform integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n);

  private:
    std::uint64_t s_[4];
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace pqt
