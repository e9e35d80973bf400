// Copyright 2026 The ppack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPACK_CORE_RNG_HPP_
#define PPACK_CORE_RNG_HPP_

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every random
// quantity in the library is a pure function of (seed, counter), so results
// reproduce across platforms and across thread schedules.

#include <array>
#include <cstdint>
#include <limits>

namespace ppack {

using Seed = std::uint64_t;

inline constexpr const char* kRngId = "philox4x32-10";

using PhiloxBlock = std::array<std::uint32_t, 4>;

PhiloxBlock Philox4x32(PhiloxBlock counter, std::array<std::uint32_t, 2> key);

// Two 64-bit words from the block at counter (a, b) under `seed`.
std::array<std::uint64_t, 2> PhiloxWords(Seed seed, std::uint64_t a,
                                         std::uint64_t b);

// Uniform double in [0, 1) with 53 random bits.
inline double ToUnitInterval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// Two independent standard normals from one block (Box-Muller).
std::array<double, 2> GaussianPair(Seed seed, std::uint64_t a,
                                   std::uint64_t b);

// Sequential stream over the counter space; satisfies
// UniformRandomBitGenerator so it composes with <algorithm>, but callers that
// need platform-stable distributions use the member helpers, not <random>.
class PhiloxStream {
 public:
  using result_type = std::uint64_t;

  explicit PhiloxStream(Seed seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  double Uniform() { return ToUnitInterval((*this)()); }
  // Unbiased integer in [0, bound); bound > 0.
  std::uint64_t Below(std::uint64_t bound);
  double Gaussian();

 private:
  Seed seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ppack

#endif  // PPACK_CORE_RNG_HPP_
