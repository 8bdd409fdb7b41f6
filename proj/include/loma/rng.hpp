/**
 * Copyright 2026 The LOMA Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>

namespace loma {

/// SplitMix64 output finalizer.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * SplitMix64 stream. Every random decision in the library is drawn from one
 * of these, in a fixed order, so results are portable and bit-exact.
 *
 * Work item i of a run seeded with m uses for_item(m, i); streams are
 * values and are never shared between workers.
 */
class RngStream {
public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  constexpr explicit RngStream(std::uint64_t state) noexcept : state_(state) {}

  static constexpr RngStream for_item(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return RngStream(splitmix64_mix(master_seed ^ ((index + 1) * kGamma)));
  }

  constexpr std::uint64_t next64() noexcept {
    ++draws_;
    state_ += kGamma;
    return splitmix64_mix(state_);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next64() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  /// Number of values drawn since construction.
  constexpr std::uint64_t draws() const noexcept { return draws_; }

private:
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

} // namespace loma
