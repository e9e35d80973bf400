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

#include "core/rng.hpp"

#include <cmath>
#include <numbers>

namespace ppack {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint32_t Lo(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
inline std::uint32_t Hi(std::uint64_t v) {
  return static_cast<std::uint32_t>(v >> 32);
}

}  // namespace

PhiloxBlock Philox4x32(PhiloxBlock c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kMul0, c[0], hi0, lo0);
    MulHiLo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<std::uint64_t, 2> PhiloxWords(Seed seed, std::uint64_t a,
                                         std::uint64_t b) {
  const PhiloxBlock out =
      Philox4x32({Lo(a), Hi(a), Lo(b), Hi(b)}, {Lo(seed), Hi(seed)});
  return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
          (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

std::array<double, 2> GaussianPair(Seed seed, std::uint64_t a,
                                   std::uint64_t b) {
  const auto w = PhiloxWords(seed, a, b);
  // 1 - U keeps the log argument in (0, 1].
  const double u1 = 1.0 - ToUnitInterval(w[0]);
  const double u2 = ToUnitInterval(w[1]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

PhiloxStream::result_type PhiloxStream::operator()() {
  if (buffered_ == 0) {
    buffer_ = PhiloxWords(seed_, counter_++, stream_);
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

std::uint64_t PhiloxStream::Below(std::uint64_t bound) {
  // Lemire's nearly-divisionless method.
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double PhiloxStream::Gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gaussian_;
  }
  const double u1 = 1.0 - Uniform();
  const double u2 = Uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_gaussian_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace ppack
