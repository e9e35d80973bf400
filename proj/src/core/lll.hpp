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

#ifndef PPACK_CORE_LLL_HPP_
#define PPACK_CORE_LLL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/instance.hpp"
#include "core/rng.hpp"
#include "core/walk.hpp"

namespace ppack {

// Two rows are adjacent when they share a column that is active.
struct DependencyGraph {
  std::vector<std::size_t> degree;
  std::size_t max_degree = 0;
};

// `active` is a per-variable 0/1 mask; an empty span means all variables.
DependencyGraph BuildDependency(const PackingInstance& instance,
                                std::span<const std::uint8_t> active = {});

// Smallest t with e * 2^-t * (d + 1) <= 1.
int LllErrorTarget(std::uint64_t d);

// Smallest t with ChernoffTail(1, t - 1) <= 1 / (e (d + 1)). Means below 1
// only shrink the tail, so the unit-mean threshold is conservative. d >= 2.
int LllErrorTargetTight(std::uint64_t d);

// (e^delta / (1 + delta)^(1 + delta))^mean.
double ChernoffTail(double mean, double delta);

bool LllGuardHolds(std::uint64_t d, int t);

// max((m/opt)^(1/(B-1)), d^(1/(B-1))); B > 1.
double DampedScale(double m, double opt, double d, double B);

// e (d alpha)^(1/B), nudged up by a factor 1 + 1e-9 so that
// (beta/e)^B > d alpha holds strictly.
double DampedBeta(double d, double alpha, double B);

// Asymmetric-LLL bookkeeping with y_i = 1/(alpha d) for row events and
// y_{m+1} = 1/2 for the objective event.
struct AsymmetricLllCheck {
  double row_event_bound = 0.0;      // ChernoffTail at the row's mean
  double row_event_allowance = 0.0;  // y (1 - y)^d / 2
  double objective_event_bound = 0.0;      // exp(-eps^2 OPT / 2)
  double objective_event_allowance = 0.0;  // (1 - y)^m / 2
  bool rows_ok = false;
  bool objective_ok = false;
};

AsymmetricLllCheck CheckAsymmetricLll(double d, double alpha, double m,
                                      double opt, double epsilon, int t,
                                      double row_mean);

// The two competing terms of an error bound, each log(x)/log(log(x)); NaN
// where undefined (x <= e).
struct ErrorBranches {
  double degree_branch = 0.0;
  double objective_branch = 0.0;
  double value() const;  // max of the finite branches
};

// Bounded-column rounding: rho ones per column.
ErrorBranches ColumnBoundedError(double rho, double m, double opt);
// Random k-sparse rows: degree term with d ~ (mk ln m / n) ln m.
ErrorBranches RandomMatrixError(double m, double n, double k, double opt);
// Same split for a measured dependency degree.
ErrorBranches MeasuredDegreeError(double d, double m, double opt);

// (ln(mkp ln m / n) + ln ln m) / ln ln(mkp ln m / n + ln m); NaN where the
// inner logarithms are not positive.
double SparseBoundExpression(double m, double n, double k, double p);

// ln m / ln ln m.
double RaghavanThompsonReference(double m);

enum class EventSelection { kLowestIndex, kUniform };

struct LllConfig {
  int error_target = 1;
  double alpha = 1.0;
  double epsilon = 0.5;
  // Objective event threshold; unset means (1 - epsilon) OPT of the point.
  std::optional<double> objective_floor;
  std::size_t max_resamples = 1'000'000;
  Seed seed = 0;
  EventSelection selection = EventSelection::kLowestIndex;

  void Validate() const;
};

// Event id for the objective event is num_rows().
std::vector<std::size_t> ViolatingRows(const PackingInstance& instance,
                                       std::span<const std::uint8_t> solution,
                                       std::int64_t t, double floor);

// Pr[x_i = 1] = point_i, independently; deterministic in (seed, i).
Solution IndependentRound(const FractionalPoint& point, Seed seed);

// Called after each resampling with the event id and the re-randomized
// variables.
using ResampleObserver =
    std::function<void(std::size_t event, std::span<const Index> resampled,
                       std::span<const std::uint8_t> solution)>;

// General resampling engine. Frozen variables keep `preset` and are never
// resampled; the rest start from an independent rounding of `probs`.
struct ResampleProblem {
  std::span<const double> probs;
  std::span<const std::uint8_t> frozen;  // empty: nothing frozen
  std::span<const std::uint8_t> preset;
  std::optional<std::int64_t> load_cap;   // row events: load > cap
  std::optional<double> objective_floor;  // objective event: value < floor
};

RoundingOutcome Resample(const PackingInstance& instance,
                         const ResampleProblem& problem,
                         std::size_t max_resamples, Seed seed,
                         EventSelection selection,
                         const ResampleObserver& observer = {});

// Moser-Tardos over every variable. On exhaustion returns the best outcome
// seen with converged = false.
RoundingOutcome MoserTardos(const PackingInstance& instance,
                            const FractionalPoint& point,
                            const LllConfig& config,
                            const ResampleObserver& observer = {});

// Each variable is 1 with probability 1/k; then rows above
// q = max(1, ceil(ln(mk/n))) have their ones cleared in ascending index order
// until the load is q.
RoundingOutcome GreedyRepair(const PackingInstance& instance, std::size_t k,
                             Seed seed);
std::int64_t GreedyRepairCap(std::size_t m, std::size_t n, std::size_t k);

// How fixed coordinates are turned into 0/1 after the walk. kNearest snaps
// them to the closer endpoint and freezes them; kIndependent leaves them to
// the resampling stage with their fixed value as probability.
enum class FixedRounding { kNearest, kIndependent };

struct PipelineConfig {
  WalkConfig walk;
  std::optional<int> error_target;  // unset: LllErrorTarget(d_measured)
  bool load_events = true;
  bool objective_event = true;
  std::optional<double> objective_floor;  // unset: (1 - epsilon) OPT / S
  double alpha = 1.0;
  double epsilon = 0.5;
  std::size_t max_resamples = 1'000'000;
  Seed seed = 0;
  EventSelection selection = EventSelection::kLowestIndex;
  FixedRounding fixed_rounding = FixedRounding::kNearest;
  // Run the resampling stage even when e 2^-t (d+1) <= 1 fails.
  bool force = false;
  // Damped rounding only: use B + 1 in the scale exponent.
  bool integer_b_shift = false;
};

struct PipelineResult {
  RoundingOutcome outcome;
  double opt_fractional = 0.0;  // <c, x'>
  std::int64_t d_measured = 0;
  std::int64_t t_used = 0;
  double s_used = 1.0;
  double beta = 0.0;  // damping factor, damped rounding only
  bool guard_ok = true;
  bool walk_complete = true;
  std::size_t walk_steps = 0;
};

// Walk from x'/S, fix, then resample the sparsified system.
PipelineResult WalkThenResample(const PackingInstance& instance,
                                const FractionalPoint& point,
                                const PipelineConfig& config);

// Scale by S = DampedScale(m, OPT, d, B), walk, and resample with error
// target floor(B). Requires rhs uniformly equal to B >= 1.
PipelineResult DampedRound(const PackingInstance& instance,
                           const FractionalPoint& point, double B,
                           const PipelineConfig& config);

Seed DeriveSeed(Seed seed, std::uint64_t tag);

}  // namespace ppack

#endif  // PPACK_CORE_LLL_HPP_
