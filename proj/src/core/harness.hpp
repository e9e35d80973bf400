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

#ifndef PPACK_CORE_HARNESS_HPP_
#define PPACK_CORE_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/generators.hpp"
#include "core/instance.hpp"
#include "core/lll.hpp"
#include "json.hpp"

namespace ppack {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Method { kRt, kGreedy, kWalkLll, kDamped };

std::string MethodName(Method method);
// rt | greedy | walk-lll | damped
Method ParseMethod(const std::string& tag);

// Unset fields take their method-specific defaults at run time.
struct MethodConfig {
  Method method = Method::kRt;
  std::optional<int> t;  // unset: auto
  double alpha = 1.0;
  double epsilon = 0.5;
  std::optional<double> B;  // unset: max rhs
  Seed seed = 0;
  bool force = false;
  std::optional<FixedRounding> fixed_rounding;
  bool integer_b_shift = false;
  bool load_events = true;
  bool objective_event = true;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> scale;
  std::optional<std::size_t> stop_unfixed;
  std::optional<std::size_t> max_steps;
  std::optional<std::size_t> greedy_k;  // unset: max row size
  std::size_t max_resamples = 1'000'000;
  EventSelection selection = EventSelection::kLowestIndex;

  // Applies one key=value override; throws kInvalidArgument on unknown keys.
  void Set(const std::string& key, const std::string& value);
};

struct MethodResult {
  Method method = Method::kRt;
  Seed seed = 0;
  RoundingOutcome outcome;
  double opt_fractional = 0.0;
  std::int64_t resamples = 0;
  std::int64_t walk_steps = 0;
  std::int64_t d_measured = 0;
  std::int64_t t_used = 0;  // 0 for methods without an error target
  double s_used = 1.0;
  bool guard_ok = true;
  nlohmann::ordered_json config;  // effective configuration after defaulting
};

// `point` may be empty for greedy.
MethodResult RunMethod(const PackingInstance& instance,
                       const FractionalPoint& point, const MethodConfig& config);

nlohmann::ordered_json ResultJson(const MethodResult& result);

nlohmann::ordered_json Metadata();

struct PlanCell {
  GeneratorSpec spec;
  // Fixed instance seed; unset means each trial draws its instance with the
  // trial seed.
  std::optional<Seed> instance_seed;
  // Uniform point value for families without a generated point; unset means
  // 1 / max row size. The point is scaled down to feasibility when needed.
  std::optional<double> point_value;
  MethodConfig method;
  std::size_t trials = 0;
  Seed seed_base = 0;
};

// One `cell <family> key=val ... <method> key=val ... <trials> <seedbase>`
// per line; blank lines and lines starting with '#' are skipped.
struct ExperimentPlan {
  std::vector<PlanCell> cells;
};

ExperimentPlan ParsePlan(const std::string& text);
ExperimentPlan LoadPlan(const std::string& path);

// Flag value if positive, else PPACK_WORKERS, else hardware concurrency.
std::size_t ResolveWorkers(std::size_t requested);

struct CellResult {
  std::size_t cell = 0;
  std::size_t trial = 0;
  Seed seed = 0;
  std::string status;  // ok | error
  std::string error;
  std::optional<MethodResult> result;
  nlohmann::ordered_json json;
};

struct PlanRun {
  std::vector<CellResult> results;  // ordered by (cell, trial)
};

// Writes cell<c>_trial<j>.json, results.csv, summary.csv and meta.json under
// out_dir (created if missing). Only meta.json carries a timestamp.
PlanRun RunPlan(const ExperimentPlan& plan, const std::string& out_dir,
                std::size_t workers = 0);

// Recomputes summary.csv content from the per-cell JSON results.
std::string SummaryCsv(const ExperimentPlan& plan,
                       const std::vector<nlohmann::ordered_json>& results);

}  // namespace ppack

#endif  // PPACK_CORE_HARNESS_HPP_
