/*
Copyright 2026 The poiwave Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

// Counter-based random streams.
//
// Every Monte-Carlo draw in the library comes from a Philox4x32-10 block
// keyed by the user seed, with the replication index and the draw purpose
// folded into the counter. A replication therefore sees the same numbers
// whether it runs first, last, or on another thread.
//
// Reference: Salmon, Moraes, Dror, Shaw (SC 2011), "Parallel random numbers:
// as easy as 1, 2, 3".

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace poiwave {

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Block generate(Block ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeylA;
        key[1] += kWeylB;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMulA = 0xD2511F53u;
  static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  static constexpr std::uint32_t kWeylB = 0xBB67AE85u;

  static constexpr Block single_round(const Block& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMulA} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMulB} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

/// What a stream is used for. Distinct purposes never share counters.
enum class StreamPurpose : std::uint32_t {
  Sample = 1,  // point process realisations
  Noise = 2,   // auxiliary Gaussian noise
  Design = 3,  // random test designs (coefficient sets, signal choices)
};

/// Sequential view over the counter space of one (seed, replication, purpose)
/// triple. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint32_t replication = 0,
                      StreamPurpose purpose = StreamPurpose::Sample) noexcept
      : seed_(seed), replication_(replication), purpose_(purpose) {}

  [[nodiscard]] CounterRng substream(std::uint32_t replication, StreamPurpose purpose) const noexcept {
    return CounterRng(seed_, replication, purpose);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    if (cursor_ == 2) refill();
    const std::size_t i = 2 * cursor_++;
    return (std::uint64_t{block_[i]} << 32) | block_[i + 1];
  }

  /// Uniform on the open interval (0, 1), 53 bits.
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by the Box-Muller transform (one variate per pair of uniforms).
  double normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint32_t replication() const noexcept { return replication_; }
  [[nodiscard]] std::uint64_t blocks_used() const noexcept { return counter_; }

 private:
  void refill() noexcept {
    const Philox4x32::Block ctr{static_cast<std::uint32_t>(counter_),
                                static_cast<std::uint32_t>(counter_ >> 32), replication_,
                                static_cast<std::uint32_t>(purpose_)};
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                              static_cast<std::uint32_t>(seed_ >> 32)};
    block_ = Philox4x32::generate(ctr, key);
    ++counter_;
    cursor_ = 0;
  }

  std::uint64_t seed_;
  std::uint32_t replication_;
  StreamPurpose purpose_;
  std::uint64_t counter_ = 0;
  Philox4x32::Block block_{};
  std::size_t cursor_ = 2;
};

}  // namespace poiwave
