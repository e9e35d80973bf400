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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/lll.hpp"
#include "doctest.h"

using namespace ppack;

namespace {

constexpr double kE = std::numbers::e;

PackingInstance Disjoint(std::size_t m, std::size_t k, double rhs = 1.0) {
  std::vector<std::vector<Index>> rows(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < k; ++i) rows[j].push_back(static_cast<Index>(j * k + i));
  }
  return PackingInstance::Uniform(m * k, std::move(rows), rhs);
}

}  // namespace

TEST_SUITE("lll") {

TEST_CASE("dependency degrees by hand") {
  const auto inst = PackingInstance::Uniform(3, {{0, 1}, {1, 2}, {0}}, 1.0, RowPolicy::kLenient);
  const DependencyGraph g = BuildDependency(inst);
  CHECK(g.degree == std::vector<std::size_t>{2, 1, 1});
  CHECK(g.max_degree == 2);
  const auto apart = PackingInstance::Uniform(3, {{0}, {1}, {2}}, 1.0, RowPolicy::kLenient);
  CHECK(BuildDependency(apart).max_degree == 0);
}

TEST_CASE("dependency respects the active set") {
  const auto inst = PackingInstance::Uniform(3, {{0, 1}, {1, 2}, {0}}, 1.0, RowPolicy::kLenient);
  const std::vector<std::uint8_t> active{1, 0, 1};
  CHECK(BuildDependency(inst, active).degree == std::vector<std::size_t>{1, 0, 1});
  CHECK_THROWS_AS(BuildDependency(inst, std::vector<std::uint8_t>{1}), Error);
}

TEST_CASE("dependency is symmetric and matches brute force") {
  const auto inst = RandomKSparse(60, 40, 4, 3);
  const DependencyGraph g = BuildDependency(inst);
  const std::size_t m = inst.num_rows();
  for (std::size_t a = 0; a < m; ++a) {
    std::size_t deg = 0;
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const auto ra = inst.row(a);
      const auto rb = inst.row(b);
      bool share = false;
      for (Index i : ra) share |= std::binary_search(rb.begin(), rb.end(), i);
      deg += share;
    }
    CHECK(g.degree[a] == deg);
    CHECK(g.degree[a] < m);
  }
}

TEST_CASE("error target") {
  CHECK(LllErrorTarget(0) == 2);
  CHECK(LllErrorTarget(3) == 4);
  CHECK(LllErrorTarget(1000) == 12);
  CHECK(LllErrorTarget(1'000'000) == 22);
  for (std::uint64_t d : {0ull, 1ull, 5ull, 77ull, 4096ull}) {
    const int t = LllErrorTarget(d);
    CHECK(LllGuardHolds(d, t));
    CHECK_FALSE(LllGuardHolds(d, t - 1));
  }
}

TEST_CASE("tight error target") {
  CHECK(LllErrorTargetTight(2) == 4);
  int prev = 0;
  for (std::uint64_t d = 2; d < 5000; d = d * 3 / 2 + 1) {
    const int t = LllErrorTargetTight(d);
    CHECK(t >= prev);
    prev = t;
  }
  CHECK(LllErrorTargetTight(1'000'000) < LllErrorTarget(1'000'000));
  CHECK_THROWS_AS(LllErrorTargetTight(1), Error);
}

TEST_CASE("chernoff tail") {
  CHECK(ChernoffTail(1.0, kE - 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(ChernoffTail(1.0, 1e-9) == doctest::Approx(1.0));
  for (double d : {0.1, 0.5, 2.0, 7.0}) {
    const double one = ChernoffTail(1.0, d);
    CHECK(ChernoffTail(2.0, d) == doctest::Approx(one * one).epsilon(1e-12));
  }
}

TEST_CASE("violating events") {
  const auto inst = PackingInstance::Uniform(3, {{0, 1}}, 1.0, RowPolicy::kLenient);
  CHECK(ViolatingRows(inst, Solution{0, 0, 0}, 1, 0.0).empty());
  CHECK(ViolatingRows(inst, Solution{1, 1, 1}, 1, 0.0) == std::vector<std::size_t>{0});
  CHECK(ViolatingRows(inst, Solution{0, 0, 0}, 1, 1.0) == std::vector<std::size_t>{1});
}

TEST_CASE("damped scale") {
  CHECK(DampedScale(1000, 100, 10, 3) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
  CHECK(DampedScale(1000, 100, 10, 3) == doctest::Approx(3.16228).epsilon(1e-5));
  CHECK(DampedScale(500, 50, 10, 4) == doctest::Approx(std::cbrt(10.0)));
  CHECK(DampedScale(1000, 100, 10, 1e9) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(DampedScale(10, 1, 1, 1.0), Error);
}

TEST_CASE("damped beta") {
  CHECK(DampedBeta(1, 1, 3) == doctest::Approx(kE).epsilon(1e-8));
  CHECK(DampedBeta(16, 1, 4) == doctest::Approx(2 * kE).epsilon(1e-8));
  const double B = 4.0, d = 16.0, alpha = 1.0;
  const double beta = DampedBeta(d, alpha, B);
  CHECK(std::pow(beta / kE, B) > d * alpha);
  const double tail = ChernoffTail(B / beta, beta - 1.0);
  CHECK(tail <= std::pow(kE / beta, B));
  CHECK(std::pow(kE / beta, B) <= 1.0 / (alpha * d));
}

TEST_CASE("independent rounding") {
  CHECK(IndependentRound(FractionalPoint(50, 0.0), 1) == Solution(50, 0));
  CHECK(IndependentRound(FractionalPoint(50, 1.0), 1) == Solution(50, 1));
  const Solution s = IndependentRound(FractionalPoint(100000, 0.25), 4);
  double ones = 0;
  for (auto v : s) ones += v;
  CHECK(std::abs(ones / 1e5 - 0.25) <= 0.005);
  CHECK(IndependentRound(FractionalPoint(100, 0.5), 4) ==
        IndependentRound(FractionalPoint(100, 0.5), 4));
}

TEST_CASE("moser-tardos leaves a good integral point alone") {
  const auto inst = PackingInstance::Uniform(4, {{0, 1}, {2, 3}}, 1.0);
  LllConfig cfg;
  cfg.error_target = 1;
  const RoundingOutcome out = MoserTardos(inst, FractionalPoint({1, 0, 0, 1}), cfg);
  CHECK(out.solution == Solution{1, 0, 0, 1});
  CHECK(out.stats.at("resamples") == 0);
  CHECK(out.converged);
}

TEST_CASE("moser-tardos with no events is independent rounding") {
  const auto inst = RandomKSparse(30, 30, 5, 1);
  const FractionalPoint x(30, 0.2);
  LllConfig cfg;
  cfg.error_target = 5;
  cfg.objective_floor = 0.0;
  cfg.seed = 12;
  CHECK(MoserTardos(inst, x, cfg).solution == IndependentRound(x, 12));
}

TEST_CASE("moser-tardos on disjoint rows converges fast") {
  const std::size_t m = 256, k = 8;
  const auto inst = Disjoint(m, k);
  const FractionalPoint x(m * k, 1.0 / k);
  int fast = 0;
  for (Seed s = 0; s < 100; ++s) {
    LllConfig cfg;
    cfg.error_target = LllErrorTarget(BuildDependency(inst).max_degree);
    cfg.seed = s;
    const RoundingOutcome out = MoserTardos(inst, x, cfg);
    CHECK(out.converged);
    CHECK(out.linf_load <= cfg.error_target);
    CHECK(out.objective >= Objective(inst, x.values()) / 2);
    fast += out.stats.at("resamples") <= static_cast<std::int64_t>(10 * m);
  }
  CHECK(fast >= 99);
}

TEST_CASE("each resampling touches exactly one event's variables") {
  const auto inst = RandomKSparse(80, 60, 6, 9);
  const FractionalPoint x(60, 1.0 / 6);
  for (EventSelection sel : {EventSelection::kLowestIndex, EventSelection::kUniform}) {
    LllConfig cfg;
    cfg.error_target = 3;
    cfg.objective_floor = 7.0;
    cfg.selection = sel;
    cfg.seed = 3;
    Solution prev = IndependentRound(x, cfg.seed);
    bool sound = true;
    std::size_t rounds = 0;
    const RoundingOutcome out = MoserTardos(
        inst, x, cfg,
        [&](std::size_t event, std::span<const Index> vars, std::span<const std::uint8_t> sol) {
          ++rounds;
          std::vector<Index> expected;
          if (event == inst.num_rows()) {
            for (Index i = 0; i < 60; ++i) expected.push_back(i);
          } else {
            const auto r = inst.row(event);
            expected.assign(r.begin(), r.end());
          }
          sound &= std::vector<Index>(vars.begin(), vars.end()) == expected;
          for (std::size_t i = 0; i < sol.size(); ++i) {
            if (sol[i] != prev[i]) {
              sound &= std::binary_search(expected.begin(), expected.end(), Index(i));
            }
          }
          prev.assign(sol.begin(), sol.end());
        });
    CHECK(sound);
    CHECK(rounds == static_cast<std::size_t>(out.stats.at("resamples")));
    CHECK(out.converged);
    CHECK(out.linf_load <= 3);
    CHECK(out.objective >= 7.0);
  }
}

TEST_CASE("exhausted resampling returns the best outcome unconverged") {
  const auto inst = PackingInstance::Uniform(4, {{0, 1, 2, 3}, {0, 1}}, 1.0, RowPolicy::kLenient);
  LllConfig cfg;
  cfg.error_target = 1;
  cfg.objective_floor = 3.0;  // unreachable with load <= 1
  cfg.max_resamples = 50;
  const RoundingOutcome out = MoserTardos(inst, FractionalPoint(4, 0.5), cfg);
  CHECK_FALSE(out.converged);
  CHECK(out.stats.at("resamples") == 50);
  CHECK(out.linf_load <= 1);
}

TEST_CASE("greedy repair cap") {
  CHECK(GreedyRepairCap(4096, 4096, 12) == 3);
  CHECK(GreedyRepairCap(10, 100, 3) == 1);
  CHECK(GreedyRepairCap(100, 100, 2) == 1);
}

TEST_CASE("greedy repair enforces the cap") {
  for (Seed s = 0; s < 20; ++s) {
    const auto inst = RandomKSparse(300, 100, 10, s);
    const RoundingOutcome out = GreedyRepair(inst, 10, s);
    CHECK(out.linf_load <= GreedyRepairCap(300, 100, 10));
  }
  const auto apart = Disjoint(50, 4);
  const RoundingOutcome d = GreedyRepair(apart, 4, 1);
  CHECK(d.linf_load <= GreedyRepairCap(50, 200, 4));
}

TEST_CASE("pipeline meets the error target and objective floor") {
  const std::size_t n = 2048;
  const auto k = static_cast<std::size_t>(std::ceil(std::log(double(n))));
  const auto inst = RandomKSparse(n, n, k, 4);
  const FractionalPoint x(n, 1.0 / k);
  PipelineConfig cfg;
  cfg.walk = WalkConfig::Defaults(inst);
  cfg.seed = 10;
  const PipelineResult r = WalkThenResample(inst, x, cfg);
  CHECK(r.outcome.converged);
  CHECK(r.outcome.linf_load <= LllErrorTarget(static_cast<std::uint64_t>(r.d_measured)));
  CHECK(r.outcome.objective >= r.opt_fractional / 2);
  CHECK(r.guard_ok);
}

TEST_CASE("pipeline guard refuses an explicit target that fails it") {
  const auto inst = RandomKSparse(200, 200, 6, 4);
  const FractionalPoint x(200, 1.0 / 6);
  PipelineConfig cfg;
  cfg.walk = WalkConfig::Defaults(inst);
  cfg.error_target = 1;
  try {
    WalkThenResample(inst, x, cfg);
    FAIL("expected a guard failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGuardFailed);
  }
  cfg.force = true;
  cfg.max_resamples = 100;
  const PipelineResult r = WalkThenResample(inst, x, cfg);
  CHECK_FALSE(r.guard_ok);
}

TEST_CASE("pipeline preserves marginals with a pure independent final stage") {
  const auto inst = PackingInstance::Uniform(3, {{0, 1}, {1, 2}}, 1.0);
  const FractionalPoint x({0.3, 0.5, 0.2});
  PipelineConfig cfg;
  cfg.walk.gamma = 0.02;
  cfg.walk.delta = 0.05;
  cfg.walk.stop_unfixed = 1;
  cfg.load_events = false;
  cfg.objective_event = false;
  cfg.fixed_rounding = FixedRounding::kIndependent;
  const int runs = 20000;
  std::vector<double> ones(3, 0.0);
  for (int s = 0; s < runs; ++s) {
    cfg.seed = s;
    const PipelineResult r = WalkThenResample(inst, x, cfg);
    for (int i = 0; i < 3; ++i) ones[i] += r.outcome.solution[i];
  }
  for (int i = 0; i < 3; ++i) {
    const double p = x[i];
    const double se = std::sqrt(p * (1 - p) / runs);
    CHECK(std::abs(ones[i] / runs - p) < 4 * se);
  }
}

TEST_CASE("damped rounding rejects B = 1 without the shift") {
  const auto h = RandomHypergraphBMatch(32, 32, 4, 1.0, 1);
  const FractionalPoint x = ScaleToFeasible(h.instance, h.point);
  PipelineConfig cfg;
  cfg.walk = WalkConfig::Defaults(h.instance);
  try {
    DampedRound(h.instance, x, 1.0, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("B + 1") != std::string::npos);
  }
  cfg.integer_b_shift = true;
  cfg.fixed_rounding = FixedRounding::kIndependent;
  const PipelineResult r = DampedRound(h.instance, x, 1.0, cfg);
  CHECK(r.outcome.linf_load <= 1);
}

TEST_CASE("damped rounding keeps vertex loads within b") {
  for (Seed s = 0; s < 10; ++s) {
    const auto h = RandomHypergraphBMatch(128, 128, 8, 2.0, s);
    const FractionalPoint x = ScaleToFeasible(h.instance, h.point);
    PipelineConfig cfg;
    cfg.walk = WalkConfig::Defaults(h.instance);
    cfg.fixed_rounding = FixedRounding::kIndependent;
    cfg.seed = s;
    const PipelineResult r = DampedRound(h.instance, x, 2.0, cfg);
    CHECK(r.outcome.converged);
    CHECK(r.outcome.linf_load <= 2);
    CHECK(r.t_used == 2);
    CHECK(r.s_used >= 1.0);
  }
}

TEST_CASE("damped rounding with unit scale matches the plain pipeline") {
  const auto inst = Disjoint(40, 2, 2.0);
  const FractionalPoint x(80, 1.0);
  PipelineConfig cfg;
  cfg.walk = WalkConfig::Defaults(inst);
  cfg.seed = 6;
  const PipelineResult damped = DampedRound(inst, x, 2.0, cfg);
  CHECK(damped.s_used == 1.0);
  cfg.error_target = 2;
  cfg.force = true;
  const PipelineResult plain = WalkThenResample(inst, x, cfg);
  CHECK(damped.outcome.solution == plain.outcome.solution);
}

TEST_CASE("asymmetric condition bookkeeping") {
  const AsymmetricLllCheck loose = CheckAsymmetricLll(10, 1, 100, 400, 0.5, 12, 1.0);
  CHECK(loose.rows_ok);
  CHECK(loose.row_event_allowance == doctest::Approx(0.1 * std::pow(0.9, 10) / 2));
  CHECK(loose.objective_event_bound == doctest::Approx(std::exp(-0.25 * 400 / 2)));
  CHECK(loose.objective_ok);
  const AsymmetricLllCheck tight = CheckAsymmetricLll(10, 1, 100, 4, 0.5, 1, 1.0);
  CHECK_FALSE(tight.rows_ok);
  CHECK_FALSE(tight.objective_ok);
}

TEST_CASE("error branch calculators") {
  auto f = [](double x) { return std::log(x) / std::log(std::log(x)); };
  const ErrorBranches c = ColumnBoundedError(4, 1000, 10);
  CHECK(c.degree_branch == doctest::Approx(f(4 * std::log(1000.0))));
  CHECK(c.objective_branch == doctest::Approx(f(100)));
  CHECK(c.value() == doctest::Approx(std::max(c.degree_branch, c.objective_branch)));
  const ErrorBranches small = MeasuredDegreeError(2, 10, 9);
  CHECK(std::isnan(small.degree_branch));
  CHECK(std::isnan(small.objective_branch));
  CHECK(RaghavanThompsonReference(1e6) == doctest::Approx(f(1e6)));
  const double lm = std::log(4096.0);
  CHECK(SparseBoundExpression(4096, 4096, 12, 1) ==
        doctest::Approx((std::log(12 * lm) + std::log(lm)) / std::log(std::log(12 * lm + lm))));
}

}  // TEST_SUITE
