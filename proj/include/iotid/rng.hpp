// Copyright 2026 The iotid Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "iotid/bytes.hpp"

namespace iotid {

/// SplitMix64 finalizer. Used only to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of stream `index` under `root`. Distinct indices give unrelated streams.
constexpr std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(root) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the distributions below are written out
/// so results do not depend on the standard library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], by rejection sampling.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    void fill(std::span<std::uint8_t> out);

    /// A child generator whose stream depends only on this generator's
    /// seed and `index`, not on how many values were drawn so far.
    Rng split(std::uint64_t index) const { return Rng(stream_seed(seed_, index)); }

    std::uint64_t seed() const noexcept { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace iotid
