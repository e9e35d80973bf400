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

#include "core/lll.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "core/error.hpp"

namespace ppack {
namespace {

constexpr double kE = std::numbers::e;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ln x / ln ln x for x > e.
double LogOverLogLog(double x) {
  if (!(x > kE)) return kNaN;
  return std::log(x) / std::log(std::log(x));
}

bool Draw(Seed seed, std::uint64_t round, Index i, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return ToUnitInterval(PhiloxWords(seed, round, i >> 1)[i & 1]) < p;
}

// Row loads with O(1) access to the maximum.
class LoadTracker {
 public:
  LoadTracker(std::vector<std::int64_t> loads, std::size_t max_row)
      : loads_(std::move(loads)), histogram_(max_row + 1, 0) {
    for (std::int64_t l : loads_) {
      ++histogram_[static_cast<std::size_t>(l)];
      max_ = std::max(max_, l);
    }
  }
  std::int64_t load(std::size_t j) const { return loads_[j]; }
  std::int64_t max() const { return max_; }
  void Add(std::size_t j, std::int64_t delta) {
    --histogram_[static_cast<std::size_t>(loads_[j])];
    loads_[j] += delta;
    ++histogram_[static_cast<std::size_t>(loads_[j])];
    if (loads_[j] > max_) max_ = loads_[j];
    while (max_ > 0 && histogram_[static_cast<std::size_t>(max_)] == 0) --max_;
  }

 private:
  std::vector<std::int64_t> loads_;
  std::vector<std::size_t> histogram_;
  std::int64_t max_ = 0;
};

}  // namespace

Seed DeriveSeed(Seed seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

DependencyGraph BuildDependency(const PackingInstance& instance,
                                std::span<const std::uint8_t> active) {
  const std::size_t m = instance.num_rows();
  if (!active.empty() && active.size() != instance.num_vars()) {
    Fail(ErrorCode::kDimensionMismatch, "active mask and instance sizes differ");
  }
  const ColumnIndex& cols = instance.columns();
  DependencyGraph g;
  g.degree.assign(m, 0);
  std::vector<std::size_t> stamp(m, std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < m; ++j) {
    stamp[j] = j;
    std::size_t deg = 0;
    for (Index i : instance.row(j)) {
      if (!active.empty() && !active[i]) continue;
      for (Index r : cols.RowsOf(i)) {
        if (stamp[r] != j) {
          stamp[r] = j;
          ++deg;
        }
      }
    }
    g.degree[j] = deg;
    g.max_degree = std::max(g.max_degree, deg);
  }
  return g;
}

bool LllGuardHolds(std::uint64_t d, int t) {
  return kE * std::ldexp(1.0, -t) * (static_cast<double>(d) + 1.0) <= 1.0;
}

int LllErrorTarget(std::uint64_t d) {
  int t = 0;
  while (!LllGuardHolds(d, t)) ++t;
  return t;
}

double ChernoffTail(double mean, double delta) {
  Require(mean > 0.0, "chernoff_tail needs mean > 0");
  Require(delta >= 0.0, "chernoff_tail needs delta >= 0");
  return std::exp(mean * (delta - (1.0 + delta) * std::log1p(delta)));
}

int LllErrorTargetTight(std::uint64_t d) {
  Require(d >= 2, "lll_error_target_tight needs d >= 2");
  const double threshold = 1.0 / (kE * (static_cast<double>(d) + 1.0));
  int t = 1;
  while (ChernoffTail(1.0, t - 1.0) > threshold) ++t;
  return t;
}

double DampedScale(double m, double opt, double d, double B) {
  if (!(B > 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "damped_scale needs B > 1; for integer B = 1 use the B + 1 substitution");
  }
  Require(opt > 0.0, "damped_scale needs opt > 0");
  Require(m > 0.0 && d >= 0.0, "damped_scale needs m > 0 and d >= 0");
  const double e = 1.0 / (B - 1.0);
  return std::max(std::pow(m / opt, e), std::pow(d, e));
}

double DampedBeta(double d, double alpha, double B) {
  Require(d >= 1.0 && alpha >= 1.0 && B >= 1.0,
          "damped_beta needs d >= 1, alpha >= 1, B >= 1");
  return kE * std::pow(d * alpha, 1.0 / B) * (1.0 + 1e-9);
}

AsymmetricLllCheck CheckAsymmetricLll(double d, double alpha, double m,
                                      double opt, double epsilon, int t,
                                      double row_mean) {
  Require(d >= 1.0 && alpha >= 1.0, "asymmetric check needs d >= 1, alpha >= 1");
  Require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  Require(row_mean > 0.0 && t >= 1, "asymmetric check needs row_mean > 0, t >= 1");
  const double y = 1.0 / (alpha * d);
  AsymmetricLllCheck c;
  c.row_event_bound =
      t > row_mean ? ChernoffTail(row_mean, t / row_mean - 1.0) : 1.0;
  c.row_event_allowance = y * std::pow(1.0 - y, d) * 0.5;
  c.objective_event_bound = std::exp(-epsilon * epsilon * opt / 2.0);
  c.objective_event_allowance = 0.5 * std::pow(1.0 - y, m);
  c.rows_ok = c.row_event_bound < c.row_event_allowance;
  c.objective_ok = c.objective_event_bound < c.objective_event_allowance;
  return c;
}

double ErrorBranches::value() const {
  double v = kNaN;
  for (double b : {degree_branch, objective_branch}) {
    if (std::isfinite(b)) v = std::isfinite(v) ? std::max(v, b) : b;
  }
  return v;
}

ErrorBranches ColumnBoundedError(double rho, double m, double opt) {
  Require(rho > 0.0 && m > 1.0 && opt > 0.0, "needs rho > 0, m > 1, opt > 0");
  return {LogOverLogLog(rho * std::log(m)), LogOverLogLog(m / opt)};
}

ErrorBranches RandomMatrixError(double m, double n, double k, double opt) {
  Require(m > 1.0 && n > 0.0 && k > 0.0 && opt > 0.0,
          "needs m > 1 and positive n, k, opt");
  const double lm = std::log(m);
  return {LogOverLogLog(m * k * lm / n * lm), LogOverLogLog(m / opt)};
}

ErrorBranches MeasuredDegreeError(double d, double m, double opt) {
  Require(m > 0.0 && opt > 0.0, "needs m > 0, opt > 0");
  return {LogOverLogLog(d), LogOverLogLog(m / opt)};
}

double SparseBoundExpression(double m, double n, double k, double p) {
  Require(m > 1.0 && n > 0.0 && k > 0.0 && p > 0.0,
          "needs m > 1 and positive n, k, p");
  const double lm = std::log(m);
  const double a = m * k * p * lm / n;
  if (!(a > 0.0) || !(lm > 1.0)) return kNaN;
  const double denom = std::log(std::log(a + lm));
  if (!(denom > 0.0)) return kNaN;
  return (std::log(a) + std::log(lm)) / denom;
}

double RaghavanThompsonReference(double m) { return LogOverLogLog(m); }

void LllConfig::Validate() const {
  Require(error_target >= 1, "error_target must be >= 1");
  Require(alpha >= 1.0, "alpha must be >= 1");
  Require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  Require(max_resamples >= 1, "max_resamples must be >= 1");
}

std::vector<std::size_t> ViolatingRows(const PackingInstance& instance,
                                       std::span<const std::uint8_t> solution,
                                       std::int64_t t, double floor) {
  const std::vector<std::int64_t> loads = RowLoads(instance, solution);
  std::vector<std::size_t> ids;
  for (std::size_t j = 0; j < loads.size(); ++j) {
    if (loads[j] > t) ids.push_back(j);
  }
  std::vector<double> x(solution.begin(), solution.end());
  if (Objective(instance, x) < floor) ids.push_back(instance.num_rows());
  return ids;
}

Solution IndependentRound(const FractionalPoint& point, Seed seed) {
  Solution s(point.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = Draw(seed, 0, static_cast<Index>(i), point[i]) ? 1 : 0;
  }
  return s;
}

RoundingOutcome Resample(const PackingInstance& instance,
                         const ResampleProblem& problem,
                         std::size_t max_resamples, Seed seed,
                         EventSelection selection,
                         const ResampleObserver& observer) {
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_rows();
  if (problem.probs.size() != n ||
      (!problem.frozen.empty() &&
       (problem.frozen.size() != n || problem.preset.size() != n))) {
    Fail(ErrorCode::kDimensionMismatch, "resampling inputs and instance sizes differ");
  }
  auto frozen = [&](std::size_t i) {
    return !problem.frozen.empty() && problem.frozen[i] != 0;
  };
  const std::vector<double>& w = instance.weights();
  const ColumnIndex& cols = instance.columns();

  Solution x(n);
  std::vector<Index> free_vars;
  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (frozen(i)) {
      x[i] = problem.preset[i] ? 1 : 0;
    } else {
      free_vars.push_back(static_cast<Index>(i));
      x[i] = Draw(seed, 0, static_cast<Index>(i), problem.probs[i]) ? 1 : 0;
    }
    if (x[i]) objective += w[i];
  }
  LoadTracker loads(RowLoads(instance, x), instance.max_row_size());

  const std::int64_t cap =
      problem.load_cap.value_or(std::numeric_limits<std::int64_t>::max());
  std::vector<std::uint8_t> resolvable(m, 0);
  for (std::size_t j = 0; j < m; ++j) {
    for (Index i : instance.row(j)) {
      if (!frozen(i)) {
        resolvable[j] = 1;
        break;
      }
    }
  }
  std::set<std::size_t> open_rows;
  std::size_t stuck_rows = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (loads.load(j) > cap) {
      if (resolvable[j]) open_rows.insert(j); else ++stuck_rows;
    }
  }
  const bool has_floor = problem.objective_floor.has_value();
  const double floor = problem.objective_floor.value_or(0.0);
  auto objective_low = [&] { return has_floor && objective < floor; };
  auto violations = [&] {
    return open_rows.size() + stuck_rows + (objective_low() ? 1 : 0);
  };

  struct Snapshot {
    std::size_t violations;
    std::int64_t linf;
    Solution x;
  };
  std::optional<Snapshot> best;
  const std::size_t initial_violations = violations();
  if (initial_violations > 0) best = Snapshot{initial_violations, loads.max(), x};

  PhiloxStream picker(DeriveSeed(seed, 7));
  std::vector<Index> scratch;
  std::size_t resamples = 0;
  while (resamples < max_resamples) {
    const bool objective_open = objective_low() && !free_vars.empty();
    const std::size_t candidates = open_rows.size() + (objective_open ? 1 : 0);
    if (candidates == 0) break;
    std::size_t event = m;
    if (selection == EventSelection::kLowestIndex) {
      if (!open_rows.empty()) event = *open_rows.begin();
    } else {
      const std::uint64_t r = picker.Below(candidates);
      if (r < open_rows.size()) {
        event = *std::next(open_rows.begin(), static_cast<std::ptrdiff_t>(r));
      }
    }
    std::span<const Index> targets;
    if (event == m) {
      targets = free_vars;
    } else {
      scratch.clear();
      for (Index i : instance.row(event)) {
        if (!frozen(i)) scratch.push_back(i);
      }
      targets = scratch;
    }

    ++resamples;
    for (Index i : targets) {
      const std::uint8_t v = Draw(seed, resamples, i, problem.probs[i]) ? 1 : 0;
      if (v == x[i]) continue;
      x[i] = v;
      const std::int64_t delta = v ? 1 : -1;
      objective += delta * w[i];
      for (Index r : cols.RowsOf(i)) {
        const bool was = loads.load(r) > cap;
        loads.Add(r, delta);
        const bool now = loads.load(r) > cap;
        if (was == now) continue;
        if (!resolvable[r]) {
          if (now) ++stuck_rows; else --stuck_rows;
        } else if (now) {
          open_rows.insert(r);
        } else {
          open_rows.erase(r);
        }
      }
    }
    if (observer) observer(event, targets, x);

    const std::size_t v = violations();
    if (v > 0 && best &&
        (v < best->violations ||
         (v == best->violations && loads.max() < best->linf))) {
      best = Snapshot{v, loads.max(), x};
    }
  }

  const std::size_t final_violations = violations();
  const bool use_best = final_violations > 0 && best &&
                        (best->violations < final_violations ||
                         (best->violations == final_violations &&
                          best->linf < loads.max()));
  RoundingOutcome out = Evaluate(instance, use_best ? best->x : x);
  out.converged = final_violations == 0;
  out.stats["resamples"] = static_cast<std::int64_t>(resamples);
  out.stats["initial_violations"] = static_cast<std::int64_t>(initial_violations);
  out.stats["unresolvable_rows"] = static_cast<std::int64_t>(stuck_rows);
  return out;
}

RoundingOutcome MoserTardos(const PackingInstance& instance,
                            const FractionalPoint& point,
                            const LllConfig& config,
                            const ResampleObserver& observer) {
  config.Validate();
  if (point.size() != instance.num_vars()) {
    Fail(ErrorCode::kDimensionMismatch, "point and instance sizes differ");
  }
  ResampleProblem problem;
  problem.probs = point.values();
  problem.load_cap = config.error_target;
  problem.objective_floor = config.objective_floor.value_or(
      (1.0 - config.epsilon) * Objective(instance, point.values()));
  return Resample(instance, problem, config.max_resamples, config.seed,
                  config.selection, observer);
}

std::int64_t GreedyRepairCap(std::size_t m, std::size_t n, std::size_t k) {
  Require(n >= 1 && k >= 1, "greedy repair needs n >= 1 and k >= 1");
  const double v = std::ceil(std::log(static_cast<double>(m) * k / n));
  return std::max<std::int64_t>(1, std::isfinite(v) ? static_cast<std::int64_t>(v) : 1);
}

RoundingOutcome GreedyRepair(const PackingInstance& instance, std::size_t k,
                             Seed seed) {
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_rows();
  for (std::size_t j = 0; j < m; ++j) {
    Require(instance.row_size(j) >= 1, "greedy repair needs non-empty rows");
  }
  const std::int64_t q = GreedyRepairCap(m, n, k);
  const FractionalPoint p(n, 1.0 / static_cast<double>(k));
  Solution x = IndependentRound(p, seed);
  std::vector<std::int64_t> loads = RowLoads(instance, x);
  const ColumnIndex& cols = instance.columns();
  std::int64_t repaired = 0;
  std::int64_t zeroed = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (loads[j] <= q) continue;
    ++repaired;
    for (Index i : instance.row(j)) {
      if (loads[j] <= q) break;
      if (!x[i]) continue;
      x[i] = 0;
      ++zeroed;
      for (Index r : cols.RowsOf(i)) --loads[r];
    }
  }
  RoundingOutcome out = Evaluate(instance, x);
  out.stats["repaired_rows"] = repaired;
  out.stats["zeroed"] = zeroed;
  out.stats["cap"] = q;
  return out;
}

namespace {

struct FinalStage {
  std::vector<double> probs;
  std::vector<std::uint8_t> frozen;
  std::vector<std::uint8_t> preset;
  std::vector<std::uint8_t> active;
};

FinalStage PrepareFinalStage(const WalkState& st, FixedRounding mode) {
  const std::size_t n = st.values.size();
  FinalStage f{st.values, std::vector<std::uint8_t>(n), std::vector<std::uint8_t>(n),
               std::vector<std::uint8_t>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const double y = st.values[i];
    bool freeze = false;
    bool high = false;
    if (mode == FixedRounding::kNearest && st.fixed[i] != FixStatus::kUnfixed) {
      freeze = true;
      high = st.fixed[i] == FixStatus::kFixedHigh;
    } else if (y <= 0.0 || y >= 1.0) {
      freeze = true;
      high = y >= 1.0;
    }
    f.frozen[i] = freeze ? 1 : 0;
    f.preset[i] = high ? 1 : 0;
    f.active[i] = freeze ? 0 : 1;
    if (freeze) f.probs[i] = high ? 1.0 : 0.0;
  }
  return f;
}

void RecordWalk(const WalkState& st, RoundingOutcome& out) {
  out.stats["walk_steps"] = static_cast<std::int64_t>(st.step_count);
  out.stats["phases"] = static_cast<std::int64_t>(st.phases.size());
  out.stats["fixed_low"] = static_cast<std::int64_t>(st.num_fixed_low);
  out.stats["fixed_high"] = static_cast<std::int64_t>(st.num_fixed_high);
  out.stats["walk_incomplete"] = st.incomplete ? 1 : 0;
}

PipelineResult Finish(const PackingInstance& instance, const WalkResult& walk,
                      const PipelineConfig& config, double opt, double scale,
                      std::optional<std::int64_t> forced_t,
                      bool enforce_guard) {
  const FinalStage stage = PrepareFinalStage(walk.state, config.fixed_rounding);
  PipelineResult r;
  r.opt_fractional = opt;
  r.s_used = scale;
  r.walk_steps = walk.state.step_count;
  r.walk_complete = !walk.state.incomplete;
  const DependencyGraph g = BuildDependency(instance, stage.active);
  r.d_measured = static_cast<std::int64_t>(g.max_degree);
  r.t_used = forced_t ? *forced_t
                      : config.error_target.value_or(LllErrorTarget(g.max_degree));
  r.guard_ok = r.t_used <= std::numeric_limits<int>::max() &&
               LllGuardHolds(g.max_degree, static_cast<int>(r.t_used));
  if (enforce_guard && config.load_events && !r.guard_ok && !config.force) {
    Fail(ErrorCode::kGuardFailed,
         "LLL guard e*2^-t*(d+1) <= 1 fails for d=" + std::to_string(r.d_measured) +
             ", t=" + std::to_string(r.t_used) + "; rerun with force to proceed");
  }
  ResampleProblem problem;
  problem.probs = stage.probs;
  problem.frozen = stage.frozen;
  problem.preset = stage.preset;
  if (config.load_events) problem.load_cap = r.t_used;
  if (config.objective_event) {
    problem.objective_floor =
        config.objective_floor.value_or((1.0 - config.epsilon) * opt / scale);
  }
  r.outcome = Resample(instance, problem, config.max_resamples,
                       DeriveSeed(config.seed, 1), config.selection);
  RecordWalk(walk.state, r.outcome);
  return r;
}

void ValidatePipeline(const PipelineConfig& config) {
  config.walk.Validate();
  Require(config.alpha >= 1.0, "alpha must be >= 1");
  Require(config.epsilon > 0.0 && config.epsilon < 1.0, "epsilon must lie in (0, 1)");
  Require(!config.error_target || *config.error_target >= 1,
          "error_target must be >= 1");
  Require(config.max_resamples >= 1, "max_resamples must be >= 1");
}

}  // namespace

PipelineResult WalkThenResample(const PackingInstance& instance,
                                const FractionalPoint& point,
                                const PipelineConfig& config) {
  ValidatePipeline(config);
  const FractionalPoint x = Validate(instance, point);
  WalkConfig wc = config.walk;
  wc.seed = config.seed;
  const WalkResult walk = WalkRound(instance, x, wc);
  return Finish(instance, walk, config, Objective(instance, x.values()), wc.scale,
                std::nullopt, true);
}

PipelineResult DampedRound(const PackingInstance& instance,
                           const FractionalPoint& point, double B,
                           const PipelineConfig& config) {
  ValidatePipeline(config);
  Require(B >= 1.0, "damped rounding needs B >= 1");
  Require(instance.HasUniformRhs(B), "damped rounding needs every rhs equal to B");
  const double b_eff = config.integer_b_shift ? B + 1.0 : B;
  if (!(b_eff > 1.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "damped rounding with B = 1 leaves the scale undefined; enable the "
         "B + 1 substitution");
  }
  const FractionalPoint x = Validate(instance, point);
  const double opt = Objective(instance, x.values());
  Require(opt > 0.0, "damped rounding needs a point with positive objective");

  std::vector<std::uint8_t> support(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) support[i] = x[i] > 0.0 ? 1 : 0;
  const std::size_t d = BuildDependency(instance, support).max_degree;
  const double scale = std::max(
      1.0, DampedScale(static_cast<double>(instance.num_rows()), opt,
                       static_cast<double>(d), b_eff));

  WalkConfig wc = config.walk;
  wc.seed = config.seed;
  wc.scale = scale;
  const WalkResult walk = WalkRound(instance, x, wc);
  PipelineResult r = Finish(instance, walk, config, opt, scale,
                            static_cast<std::int64_t>(std::floor(B)), false);
  r.d_measured = static_cast<std::int64_t>(d);
  r.beta = DampedBeta(std::max<double>(static_cast<double>(d), 1.0), config.alpha, B);
  r.outcome.stats["integer_b_shift"] = config.integer_b_shift ? 1 : 0;
  return r;
}

}  // namespace ppack
