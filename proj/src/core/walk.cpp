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

#include "core/walk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

#include "core/error.hpp"

namespace ppack {
namespace {

constexpr double kMaxDuration = 4611686018427387904.0;  // 2^62

double LogFloor(std::size_t n) {
  return std::max(std::log(static_cast<double>(std::max<std::size_t>(n, 1))), 1.5);
}

}  // namespace

WalkConfig WalkConfig::Defaults(const PackingInstance& instance) {
  WalkConfig c;
  const double ln_n = LogFloor(instance.num_vars());
  c.delta = 1.0 / (ln_n * ln_n);
  c.gamma = c.delta / ln_n;
  const double m = static_cast<double>(instance.num_rows());
  c.stop_unfixed =
      m >= 2 ? static_cast<std::size_t>(std::ceil(std::log(m))) : std::size_t{1};
  return c;
}

void WalkConfig::Validate() const {
  Require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
  Require(delta > 0.0 && delta < 0.5, "delta must lie in (0, 1/2)");
  Require(gamma <= delta, "gamma must not exceed delta");
  Require(scale >= 1.0 && std::isfinite(scale), "scale must be >= 1");
  Require(max_steps >= 1, "max_steps must be >= 1");
}

bool WalkConfig::GammaWithinLogRelation(std::size_t n) const {
  return gamma <= delta / LogFloor(n) * (1.0 + 1e-12);
}

std::size_t WalkState::MaxUnfixed() const {
  return unfixed_per_row.empty()
             ? 0
             : *std::max_element(unfixed_per_row.begin(), unfixed_per_row.end());
}

double WalkState::MaxAbsError() const {
  double m = 0.0;
  for (double e : accumulated_error) m = std::max(m, std::abs(e));
  return m;
}

std::uint64_t PhaseDuration(int p, std::size_t n, double gamma) {
  Require(p >= 0, "phase index must be >= 0");
  Require(n >= 1, "n must be >= 1");
  Require(gamma > 0.0, "gamma must be positive");
  const double ng = static_cast<double>(n) * gamma;
  const double t = std::ldexp(1.0, 2 * p) / (ng * ng);
  if (!(t <= kMaxDuration)) {
    Fail(ErrorCode::kOverflow, "phase duration for p=" + std::to_string(p) +
                                   " exceeds 2^62 steps");
  }
  return static_cast<std::uint64_t>(std::ceil(t));
}

std::uint64_t TotalSteps(double B, double S, double m, double gamma) {
  Require(m >= 2.0, "total_steps needs m >= 2");
  Require(B > 0.0 && S > 0.0 && gamma > 0.0, "total_steps needs positive B, S, gamma");
  const double lm = std::log(m);
  const double t = (B * B) / (S * S * lm * lm * gamma * gamma);
  if (!(t <= kMaxDuration)) Fail(ErrorCode::kOverflow, "total steps exceed 2^62");
  return static_cast<std::uint64_t>(std::ceil(t));
}

double ErrorBudget(int p, double B, double S, double n, double m) {
  Require(m >= 2.0, "error_budget needs m >= 2");
  Require(p >= 0 && B > 0.0 && S > 0.0 && n > 0.0,
          "error_budget needs p >= 0 and positive B, S, n");
  return 2.0 * std::sqrt(B * std::log(m) * std::ldexp(1.0, p) / (S * n));
}

int LastBudgetPhase(double n, double B, double S, double m) {
  Require(m >= 2.0, "needs m >= 2");
  const double ratio = n * B / (S * std::log(m));
  if (ratio < 1.0) return -1;
  return static_cast<int>(std::floor(std::log2(ratio) + 1e-12));
}

double AbsorptionProbability(double start, double lo, double hi) {
  Require(lo < start && start < hi, "absorption_probability needs lo < start < hi");
  return (start - lo) / (hi - lo);
}

double ExpectedAbsorptionSteps(double a, double b) {
  Require(a > 0.0 && b > 0.0, "barrier distances must be positive");
  return a * b;
}

WalkResult WalkRound(const PackingInstance& instance,
                     const FractionalPoint& point, const WalkConfig& config,
                     const WalkObserver& observer) {
  config.Validate();
  const std::size_t n = instance.num_vars();
  const std::size_t m = instance.num_rows();
  if (point.size() != n) {
    Fail(ErrorCode::kDimensionMismatch, "point and instance sizes differ");
  }

  WalkState st;
  st.start = point.values();
  for (double& x : st.start) x /= config.scale;
  Validate(instance, FractionalPoint(st.start));
  st.values = st.start;
  st.fixed.assign(n, FixStatus::kUnfixed);
  st.accumulated_error.assign(m, 0.0);
  st.unfixed_per_row.assign(m, 0);

  const ColumnIndex& cols = instance.columns();
  const double lo = config.delta;
  const double hi = 1.0 - config.delta;
  const std::size_t stop = config.stop_unfixed;

  std::vector<Index> active;
  active.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (st.values[i] <= lo) {
      st.fixed[i] = FixStatus::kFixedLow;
      ++st.num_fixed_low;
    } else if (st.values[i] >= hi) {
      st.fixed[i] = FixStatus::kFixedHigh;
      ++st.num_fixed_high;
    } else {
      active.push_back(static_cast<Index>(i));
    }
  }
  std::size_t rows_over = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (Index i : instance.row(j)) {
      if (st.fixed[i] == FixStatus::kUnfixed) ++st.unfixed_per_row[j];
    }
    if (st.unfixed_per_row[j] > stop) ++rows_over;
  }

  const double budget_b = instance.max_rhs();
  auto budget_of = [&](int p) {
    if (m < 2 || budget_b <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return ErrorBudget(p, budget_b, config.scale, static_cast<double>(n),
                       static_cast<double>(m));
  };
  auto mark_of = [&](int p) -> std::uint64_t {
    try {
      return PhaseDuration(p, std::max<std::size_t>(n, 1), config.gamma);
    } catch (const Error&) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  };
  std::vector<double> boundary_error(m, 0.0);
  std::uint64_t boundary_step = 0;
  auto close_phase = [&](std::uint64_t end_step) {
    PhaseRecord rec{st.phase, end_step, 0.0, budget_of(st.phase)};
    for (std::size_t j = 0; j < m; ++j) {
      rec.max_abs_increment = std::max(
          rec.max_abs_increment, std::abs(st.accumulated_error[j] - boundary_error[j]));
    }
    boundary_error = st.accumulated_error;
    boundary_step = end_step;
    st.phases.push_back(rec);
  };
  std::uint64_t next_mark = mark_of(0);

  if (observer) observer(st);

  std::array<double, 2> gauss{};
  while (rows_over > 0 && !active.empty()) {
    if (st.step_count >= config.max_steps) {
      st.incomplete = true;
      break;
    }
    const std::uint64_t step = ++st.step_count;
    std::uint64_t cached_pair = std::numeric_limits<std::uint64_t>::max();
    std::size_t keep = 0;
    for (Index i : active) {
      const std::uint64_t pair = i >> 1;
      if (pair != cached_pair) {
        gauss = GaussianPair(config.seed, step, pair);
        cached_pair = pair;
      }
      const double next =
          std::clamp(st.values[i] + config.gamma * gauss[i & 1], 0.0, 1.0);
      const double moved = next - st.values[i];
      st.values[i] = next;
      const auto rows = cols.RowsOf(i);
      for (Index r : rows) st.accumulated_error[r] += moved;
      FixStatus status = FixStatus::kUnfixed;
      if (next <= lo) {
        status = FixStatus::kFixedLow;
        ++st.num_fixed_low;
      } else if (next >= hi) {
        status = FixStatus::kFixedHigh;
        ++st.num_fixed_high;
      }
      if (status == FixStatus::kUnfixed) {
        active[keep++] = i;
        continue;
      }
      st.fixed[i] = status;
      for (Index r : rows) {
        if (st.unfixed_per_row[r]-- == stop + 1) --rows_over;
      }
    }
    active.resize(keep);

    while (next_mark <= step) {
      close_phase(next_mark);
      ++st.phase;
      next_mark = mark_of(st.phase);
    }
    if (observer) observer(st);
  }
  if (st.step_count > boundary_step) close_phase(st.step_count);

  WalkResult result{std::move(st), FractionalPoint()};
  result.sparsified = FractionalPoint(result.state.values);
  return result;
}

WalkTrace::WalkTrace(std::ostream& out) : out_(&out) {
  *out_ << "step,phase,max_unfixed,max_abs_error,num_fixed_low,num_fixed_high\n";
}

void WalkTrace::operator()(const WalkState& s) {
  *out_ << s.step_count << ',' << s.phase << ',' << s.MaxUnfixed() << ','
        << FormatReal(s.MaxAbsError()) << ',' << s.num_fixed_low << ','
        << s.num_fixed_high << '\n';
}

}  // namespace ppack
