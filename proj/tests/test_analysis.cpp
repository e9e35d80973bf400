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
#include <sstream>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/lll.hpp"
#include "doctest.h"

using namespace ppack;

namespace {

PackingInstance RandomPairs(std::size_t n, std::size_t m, Seed seed) {
  PhiloxStream rng(seed, 9);
  std::vector<std::vector<Index>> rows;
  for (std::size_t j = 0; j < m; ++j) {
    const auto a = static_cast<Index>(rng.Below(n));
    auto b = static_cast<Index>(rng.Below(n - 1));
    if (b >= a) ++b;
    rows.push_back({a, b});
  }
  return PackingInstance::Uniform(n, std::move(rows), 1.0);
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("lower bound condition") {
  for (double k : {1.0, 2.0, 5.0}) {
    CHECK(LowerBoundCondition(std::exp(k) * 1.01, 1, k, 1));
    CHECK_FALSE(LowerBoundCondition(std::exp(k) * 0.99, 1, k, 1));
  }
  CHECK(LowerBoundThreshold(2, 2) == doctest::Approx(29.556).epsilon(1e-4));
  CHECK(LowerBoundCondition(30 * 100, 100, 2, 2));
  CHECK_FALSE(LowerBoundCondition(29 * 100, 100, 2, 2));
}

TEST_CASE("lower bound condition is monotone in m") {
  for (double k = 1; k <= 4; ++k) {
    for (double t = 1; t <= 4; ++t) {
      bool seen = false;
      for (double m = 10; m < 1e6; m *= 1.3) {
        const bool v = LowerBoundCondition(m, 10, k, t);
        CHECK(!(seen && !v));
        seen |= v;
      }
    }
  }
}

// n = 2^20, k = ceil(ln n): ln(m/n) must exceed k on its own, so a
// polylogarithmic m/n never satisfies the condition; m/n = e^k t^t does.
TEST_CASE("lower bound at k = ln n") {
  const double n = std::ldexp(1.0, 20);
  const double ln_n = std::log(n);
  const double k = std::ceil(ln_n);
  const double polylog = n * std::pow(ln_n, 3);
  for (int t = 1; t <= 20; ++t) {
    CHECK_FALSE(LowerBoundCondition(polylog, n, k, t));
    CHECK(LowerBoundCondition(n * LowerBoundThreshold(k, t) * 1.001, n, k, t));
  }
}

TEST_CASE("sum tail") {
  CHECK(SumTail(2, 2) == doctest::Approx(2 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(SumTail(2, 2) == doctest::Approx(0.7358).epsilon(1e-4));
}

TEST_CASE("row hit probability") {
  CHECK(RowHitProbability(12, 3, 0).exact == 1.0);
  CHECK(RowHitProbability(12, 3, 1).exact == doctest::Approx(1.0 - 56.0 / 220.0).epsilon(1e-14));
  CHECK(RowHitProbability(12, 3, 1).exact == doctest::Approx(0.745454).epsilon(1e-6));
  const RowHit r = RowHitProbability(12, 3, 1);
  CHECK(r.closed_form == doctest::Approx(1.0 / std::exp(2.5)));
  CHECK_THROWS_AS(RowHitProbability(12, 3, 4), Error);
  CHECK_THROWS_AS(RowHitProbability(2, 3, 1), Error);
}

TEST_CASE("hypergeometric sums to one") {
  for (std::size_t n : {10, 33, 60, 61, 100, 300}) {
    for (std::size_t k : {1, 4, 9}) {
      for (std::size_t s : {std::size_t{0}, n / k, n / 2, n}) {
        double total = 0.0;
        for (std::size_t x = 0; x <= k; ++x) total += HypergeometricPmf(n, k, s, x);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("exact and log-gamma paths agree") {
  for (std::size_t k : {2, 5, 8}) {
    for (std::size_t t = 1; t <= k / 2; ++t) {
      const double exact = RowHitProbability(60, k, t, 12).exact;
      double lg = 0.0;
      for (std::size_t x = t; x <= k; ++x) {
        lg += std::exp(std::lgamma(13.0) - std::lgamma(x + 1.0) - std::lgamma(13.0 - x) +
                       std::lgamma(49.0) - std::lgamma(k - x + 1.0) - std::lgamma(49.0 - k + x) -
                       std::lgamma(61.0) + std::lgamma(k + 1.0) + std::lgamma(61.0 - k));
      }
      CHECK(exact == doctest::Approx(lg).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed form undercuts the exact value where the target can be met") {
  const auto cases = RowHitSweep(64, 8);
  CHECK(cases.size() == 370);
  std::size_t violations = 0;
  for (const RowHitCase& c : cases) {
    if (c.t <= c.n / c.k) {
      CHECK(!c.violated());
    } else {
      CHECK(c.value.exact == 0.0);
      violations += c.violated();
    }
  }
  CHECK(violations == 14);
}

TEST_CASE("brute force min load by hand") {
  const auto two = PackingInstance::Uniform(3, {{0, 1}, {1, 2}}, 1.0);
  const MinLoad a = BruteForceMinLoad(two, 1);
  CHECK(a.min_max_load == 1);
  CHECK(a.support == std::vector<Index>{0});
  CHECK(a.enumerated == 3);
  const auto same = PackingInstance::Uniform(2, {{0, 1}, {0, 1}}, 1.0, RowPolicy::kLenient);
  CHECK(BruteForceMinLoad(same, 2).min_max_load == 2);
  const MinLoad zero = BruteForceMinLoad(two, 0);
  CHECK(zero.min_max_load == 0);
}

TEST_CASE("brute force prefers the lexicographically smallest support") {
  const auto inst = PackingInstance::Uniform(4, {{0, 1}, {2, 3}}, 1.0);
  const MinLoad r = BruteForceMinLoad(inst, 2);
  CHECK(r.min_max_load == 1);
  CHECK(r.support == std::vector<Index>{0, 2});
}

TEST_CASE("brute force budget") {
  const auto inst = RandomKSparse(10, 40, 3, 1);
  try {
    BruteForceMinLoad(inst, 20);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
  CHECK_NOTHROW(BruteForceMinLoad(inst, 3, 1e3, true));
}

TEST_CASE("brute force is invariant under column relabeling") {
  for (Seed s = 0; s < 5; ++s) {
    const auto inst = RandomKSparse(30, 12, 3, s);
    std::vector<Index> perm(12);
    for (Index i = 0; i < 12; ++i) perm[i] = i;
    PhiloxStream rng(s, 5);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<Index>> rows;
    for (std::size_t j = 0; j < inst.num_rows(); ++j) {
      std::vector<Index> r;
      for (Index i : inst.row(j)) r.push_back(perm[i]);
      rows.push_back(std::move(r));
    }
    const auto relabeled = PackingInstance::Uniform(12, std::move(rows), 1.0);
    for (std::size_t size : {3, 5, 7}) {
      CHECK(BruteForceMinLoad(inst, size).min_max_load ==
            BruteForceMinLoad(relabeled, size).min_max_load);
    }
  }
}

TEST_CASE("dense random pairs defeat every half support") {
  for (Seed s = 0; s < 5; ++s) {
    const auto inst = RandomPairs(12, 400, s);
    CHECK(BruteForceMinLoad(inst, 6).min_max_load >= 2);
  }
}

TEST_CASE("report passes through and computes ratios") {
  const auto inst = RandomKSparse(20, 20, 3, 1);
  const FractionalPoint x(20, 1.0 / 3);
  const RoundingOutcome rt = Evaluate(inst, IndependentRound(x, 1));
  const RoundingOutcome g = GreedyRepair(inst, 3, 2);
  const BoundReport one = PipelineReport(inst, {{"rt", rt}}, Objective(inst, x.values()));
  REQUIRE(one.rows.size() == 1);
  CHECK(one.rows[0].linf_load == rt.linf_load);
  CHECK(one.rows[0].objective == rt.objective);
  const BoundReport two =
      PipelineReport(inst, {{"rt", rt}, {"greedy", g}}, Objective(inst, x.values()), 1.5);
  REQUIRE(two.rows.size() == 2);
  CHECK(two.rows[0].theoretical == two.rows[1].theoretical);
  CHECK(two.lll_target == LllErrorTarget(BuildDependency(inst).max_degree));
  for (const ReportRow& r : two.rows) {
    CHECK(std::abs(r.ratio - static_cast<double>(r.linf_load) / r.theoretical) <= 1e-12);
    CHECK(r.pass == (r.ratio <= 1.5));
  }
  std::ostringstream csv;
  WriteReportCsv(csv, two);
  CHECK(csv.str().rfind("method,linf_load,objective,theoretical,ratio,pass,", 0) == 0);
}

TEST_CASE("report rejects outcomes from another instance") {
  const auto a = RandomKSparse(20, 20, 3, 1);
  const auto b = RandomKSparse(20, 20, 3, 2);
  const RoundingOutcome out = Evaluate(b, Solution(20, 0));
  CHECK_THROWS_AS(PipelineReport(a, {{"rt", out}}, 1.0), Error);
}

}  // TEST_SUITE
