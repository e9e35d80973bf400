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

#ifndef PPACK_CORE_ANALYSIS_HPP_
#define PPACK_CORE_ANALYSIS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/instance.hpp"

namespace ppack {

// ln(m/n) > k + t ln t.
bool LowerBoundCondition(double m, double n, double k, double t);
// e^k t^t: the m/n ratio above which the condition holds.
double LowerBoundThreshold(double k, double t);

// 2 exp(-beta^2 / (2T)).
double SumTail(double T, double beta);

// P(|R cap S| = x) for a uniform k-subset R of [0, n) and a fixed s-subset S.
double HypergeometricPmf(std::size_t n, std::size_t k, std::size_t s,
                         std::size_t x);

struct RowHit {
  double exact = 0.0;        // P(|R cap S| >= t)
  double closed_form = 0.0;  // 1 / (e^(k - t/2) t^t), with 0^0 = 1
};

// Target size defaults to n / k. Exact integer arithmetic for n <= 60,
// log-gamma beyond.
RowHit RowHitProbability(std::size_t n, std::size_t k, std::size_t t,
                         std::optional<std::size_t> target_size = std::nullopt);

struct RowHitCase {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t t = 0;
  RowHit value;
  bool violated() const { return value.exact < value.closed_form; }
};

// Every (n, k, t) with n <= n_max, k <= k_max, k | n, 0 <= t <= k/2.
std::vector<RowHitCase> RowHitSweep(std::size_t n_max, std::size_t k_max);

inline constexpr double kEnumerationBudget = 1e7;

struct MinLoad {
  std::vector<Index> support;
  std::int64_t min_max_load = 0;
  std::uint64_t enumerated = 0;
};

// Exhaustive over supports of the given size; ties go to the
// lexicographically smallest support. Throws kBudgetExceeded when
// C(n, size) > budget unless `override_budget`.
MinLoad BruteForceMinLoad(const PackingInstance& instance,
                          std::size_t support_size,
                          double budget = kEnumerationBudget,
                          bool override_budget = false);

double BinomialCoefficient(std::size_t n, std::size_t k);

struct ReportRow {
  std::string method;
  std::int64_t linf_load = 0;
  double objective = 0.0;
  double theoretical = 0.0;  // LllErrorTarget(d)
  double ratio = 0.0;        // linf_load / theoretical
  bool pass = false;         // ratio <= slack
};

struct BoundReport {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::int64_t d = 0;
  double opt_fractional = 0.0;
  double slack = 1.0;
  double lll_target = 0.0;
  double rt_reference = 0.0;
  double degree_branch = 0.0;
  double objective_branch = 0.0;
  double bound_expression = 0.0;
  std::vector<ReportRow> rows;
  bool pass() const;
};

// Outcomes must carry this instance's fingerprint.
BoundReport PipelineReport(
    const PackingInstance& instance,
    const std::vector<std::pair<std::string, RoundingOutcome>>& outcomes,
    double opt_fractional, double slack = 1.0);

// method,linf_load,objective,theoretical,ratio,pass,m,n,k,d,opt_fractional,
// rt_reference,degree_branch,objective_branch,bound_expression
void WriteReportCsv(std::ostream& out, const BoundReport& report);

// n,k,t,exact,closed_form,violated
void WriteRowHitCsv(std::ostream& out, const std::vector<RowHitCase>& cases);

}  // namespace ppack

#endif  // PPACK_CORE_ANALYSIS_HPP_
