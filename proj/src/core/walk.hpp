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

#ifndef PPACK_CORE_WALK_HPP_
#define PPACK_CORE_WALK_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "core/instance.hpp"
#include "core/rng.hpp"

namespace ppack {

// Every bound in the library uses the natural logarithm.
inline constexpr const char* kLogBase = "e";

enum class FixStatus : std::uint8_t { kUnfixed, kFixedLow, kFixedHigh };

struct WalkConfig {
  double gamma = 0.0;   // step scale
  double delta = 0.0;   // fixing margin, in (0, 1/2)
  double scale = 1.0;   // the walk starts from point / scale
  // Stop once every row has at most this many unfixed variables. Zero means
  // run until every variable in a row-covered position is fixed.
  std::size_t stop_unfixed = 1;
  std::size_t max_steps = 10'000'000;
  Seed seed = 0;

  // delta = 1/(ln n)^2, gamma = delta / ln n, stop_unfixed = ceil(ln m);
  // ln n is floored at 1.5 so that delta stays below 1/2 on tiny instances.
  static WalkConfig Defaults(const PackingInstance& instance);

  void Validate() const;
  // Whether gamma <= delta / ln n holds for this n (reported, not enforced).
  bool GammaWithinLogRelation(std::size_t n) const;
};

struct PhaseRecord {
  int phase = 0;
  std::uint64_t end_step = 0;
  // max over rows of |error change during the phase|
  double max_abs_increment = 0.0;
  // ErrorBudget for this phase; NaN when undefined (m < 2 or B = 0).
  double budget = 0.0;
};

struct WalkState {
  std::vector<double> start;
  std::vector<double> values;
  std::vector<FixStatus> fixed;
  std::uint64_t step_count = 0;
  int phase = 0;
  std::vector<std::size_t> unfixed_per_row;
  // error[j] = <row_j, values - start>
  std::vector<double> accumulated_error;
  std::size_t num_fixed_low = 0;
  std::size_t num_fixed_high = 0;
  // Set when max_steps ran out before the stopping condition held.
  bool incomplete = false;
  std::vector<PhaseRecord> phases;

  std::size_t MaxUnfixed() const;
  double MaxAbsError() const;
  std::size_t NumUnfixed() const {
    return fixed.size() - num_fixed_low - num_fixed_high;
  }
};

struct WalkResult {
  WalkState state;
  // Fixed coordinates keep the value they were fixed at.
  FractionalPoint sparsified;
};

// Called once after the initial fixing pass and after every step.
using WalkObserver = std::function<void(const WalkState&)>;

WalkResult WalkRound(const PackingInstance& instance,
                     const FractionalPoint& point, const WalkConfig& config,
                     const WalkObserver& observer = {});

// ceil(4^p / (n gamma)^2). Throws kOverflow above 2^62.
std::uint64_t PhaseDuration(int p, std::size_t n, double gamma);

// ceil(B^2 / (S^2 (ln m)^2 gamma^2)); m is real so tests can force ln m.
std::uint64_t TotalSteps(double B, double S, double m, double gamma);

// 2 sqrt(B ln m 2^p / (S n)).
double ErrorBudget(int p, double B, double S, double n, double m);

// Largest p with 2^p <= n B / (S ln m); -1 when no phase qualifies.
int LastBudgetPhase(double n, double B, double S, double m);

// (start - lo) / (hi - lo): chance a driftless walk absorbs at hi first.
double AbsorptionProbability(double start, double lo, double hi);

// a * b for barriers at unit-step distances a and b.
double ExpectedAbsorptionSteps(double a, double b);

// CSV trace: step,phase,max_unfixed,max_abs_error,num_fixed_low,num_fixed_high
class WalkTrace {
 public:
  explicit WalkTrace(std::ostream& out);
  void operator()(const WalkState& state);

 private:
  std::ostream* out_;
};

}  // namespace ppack

#endif  // PPACK_CORE_WALK_HPP_
