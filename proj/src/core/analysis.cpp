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

#include "core/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "core/error.hpp"
#include "core/lll.hpp"

namespace ppack {
namespace {

using Wide = unsigned __int128;

Wide ExactBinomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double LogBinomial(std::size_t n, std::size_t k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

long double ToLongDouble(Wide v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  return static_cast<long double>(hi) * 18446744073709551616.0L + lo;
}

constexpr std::size_t kExactLimit = 60;

}  // namespace

bool LowerBoundCondition(double m, double n, double k, double t) {
  Require(n >= 1.0 && m >= n, "lower_bound_condition needs m >= n >= 1");
  Require(k >= 1.0 && t >= 1.0, "lower_bound_condition needs k >= 1, t >= 1");
  return std::log(m / n) > k + t * std::log(t);
}

double LowerBoundThreshold(double k, double t) {
  return std::exp(k) * std::pow(t, t);
}

double SumTail(double T, double beta) {
  Require(T > 0.0 && beta > 0.0, "sum_tail needs T > 0, beta > 0");
  return 2.0 * std::exp(-beta * beta / (2.0 * T));
}

double BinomialCoefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (n <= kExactLimit) return static_cast<double>(ToLongDouble(ExactBinomial(n, k)));
  return std::exp(LogBinomial(n, k));
}

double HypergeometricPmf(std::size_t n, std::size_t k, std::size_t s,
                         std::size_t x) {
  Require(k <= n && s <= n, "hypergeometric needs k, s <= n");
  if (x > k || x > s || k - x > n - s) return 0.0;
  if (n <= kExactLimit) {
    const Wide num = ExactBinomial(s, x) * ExactBinomial(n - s, k - x);
    return static_cast<double>(ToLongDouble(num) / ToLongDouble(ExactBinomial(n, k)));
  }
  return std::exp(LogBinomial(s, x) + LogBinomial(n - s, k - x) - LogBinomial(n, k));
}

RowHit RowHitProbability(std::size_t n, std::size_t k, std::size_t t,
                         std::optional<std::size_t> target_size) {
  Require(k >= 1 && t <= k && k <= n, "row_hit_probability needs t <= k <= n");
  const std::size_t s = target_size.value_or(n / k);
  Require(s <= n, "target size exceeds n");
  RowHit r;
  const double tt = t == 0 ? 1.0 : std::pow(static_cast<double>(t), static_cast<double>(t));
  r.closed_form = 1.0 / (std::exp(k - t / 2.0) * tt);
  if (t == 0) {
    r.exact = 1.0;
    return r;
  }
  const std::size_t top = std::min(k, s);
  if (n <= kExactLimit) {
    Wide num = 0;
    for (std::size_t x = t; x <= top; ++x) {
      if (k - x > n - s) continue;
      num += ExactBinomial(s, x) * ExactBinomial(n - s, k - x);
    }
    r.exact = static_cast<double>(ToLongDouble(num) / ToLongDouble(ExactBinomial(n, k)));
    return r;
  }
  for (std::size_t x = t; x <= top; ++x) r.exact += HypergeometricPmf(n, k, s, x);
  r.exact = std::min(r.exact, 1.0);
  return r;
}

std::vector<RowHitCase> RowHitSweep(std::size_t n_max, std::size_t k_max) {
  std::vector<RowHitCase> cases;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t k = 1; k <= std::min(k_max, n); ++k) {
      if (n % k != 0) continue;
      for (std::size_t t = 0; t <= k / 2; ++t) {
        cases.push_back({n, k, t, RowHitProbability(n, k, t)});
      }
    }
  }
  return cases;
}

MinLoad BruteForceMinLoad(const PackingInstance& instance,
                          std::size_t support_size, double budget,
                          bool override_budget) {
  const std::size_t n = instance.num_vars();
  Require(support_size <= n, "support size exceeds n");
  const double count = BinomialCoefficient(n, support_size);
  if (count > budget && !override_budget) {
    Fail(ErrorCode::kBudgetExceeded,
         "enumeration of " + FormatReal(count) + " supports exceeds the budget of " +
             FormatReal(budget));
  }
  const ColumnIndex& cols = instance.columns();
  std::vector<std::int64_t> loads(instance.num_rows(), 0);
  std::vector<Index> comb(support_size);
  std::iota(comb.begin(), comb.end(), Index{0});

  MinLoad best;
  best.min_max_load = std::numeric_limits<std::int64_t>::max();
  while (true) {
    std::int64_t worst = 0;
    for (Index i : comb) {
      for (Index r : cols.RowsOf(i)) worst = std::max(worst, ++loads[r]);
    }
    for (Index i : comb) {
      for (Index r : cols.RowsOf(i)) --loads[r];
    }
    ++best.enumerated;
    if (worst < best.min_max_load) {
      best.min_max_load = worst;
      best.support = comb;
    }
    // Next combination in lexicographic order.
    std::size_t pos = support_size;
    while (pos > 0 && comb[pos - 1] == n - support_size + pos - 1) --pos;
    if (pos == 0) break;
    ++comb[pos - 1];
    for (std::size_t j = pos; j < support_size; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

bool BoundReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

BoundReport PipelineReport(
    const PackingInstance& instance,
    const std::vector<std::pair<std::string, RoundingOutcome>>& outcomes,
    double opt_fractional, double slack) {
  Require(slack > 0.0, "slack must be positive");
  BoundReport rep;
  rep.m = instance.num_rows();
  rep.n = instance.num_vars();
  rep.k = instance.max_row_size();
  rep.d = static_cast<std::int64_t>(BuildDependency(instance).max_degree);
  rep.opt_fractional = opt_fractional;
  rep.slack = slack;
  rep.lll_target = LllErrorTarget(static_cast<std::uint64_t>(rep.d));
  const double m = static_cast<double>(rep.m);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  rep.rt_reference = m > 1.0 ? RaghavanThompsonReference(m) : nan;
  rep.degree_branch = rep.objective_branch = rep.bound_expression = nan;
  if (m > 1.0 && rep.n > 0 && rep.k > 0 && opt_fractional > 0.0) {
    const ErrorBranches b = RandomMatrixError(m, static_cast<double>(rep.n),
                                              static_cast<double>(rep.k), opt_fractional);
    rep.degree_branch = b.degree_branch;
    rep.objective_branch = b.objective_branch;
    rep.bound_expression =
        SparseBoundExpression(m, static_cast<double>(rep.n),
                              static_cast<double>(rep.k), instance.weight_floor());
  }
  for (const auto& [name, out] : outcomes) {
    if (out.instance_fingerprint != instance.fingerprint()) {
      Fail(ErrorCode::kInvalidArgument,
           "outcome '" + name + "' was computed on a different instance");
    }
    ReportRow row;
    row.method = name;
    row.linf_load = out.linf_load;
    row.objective = out.objective;
    row.theoretical = rep.lll_target;
    row.ratio = static_cast<double>(out.linf_load) / rep.lll_target;
    row.pass = row.ratio <= slack;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void WriteReportCsv(std::ostream& out, const BoundReport& r) {
  out << "method,linf_load,objective,theoretical,ratio,pass,m,n,k,d,opt_fractional,"
         "rt_reference,degree_branch,objective_branch,bound_expression\n";
  for (const ReportRow& row : r.rows) {
    out << row.method << ',' << row.linf_load << ',' << FormatReal(row.objective) << ','
        << FormatReal(row.theoretical) << ',' << FormatReal(row.ratio) << ','
        << (row.pass ? 1 : 0) << ',' << r.m << ',' << r.n << ',' << r.k << ',' << r.d
        << ',' << FormatReal(r.opt_fractional) << ',' << FormatReal(r.rt_reference)
        << ',' << FormatReal(r.degree_branch) << ',' << FormatReal(r.objective_branch)
        << ',' << FormatReal(r.bound_expression) << '\n';
  }
}

void WriteRowHitCsv(std::ostream& out, const std::vector<RowHitCase>& cases) {
  out << "n,k,t,exact,closed_form,violated\n";
  for (const RowHitCase& c : cases) {
    out << c.n << ',' << c.k << ',' << c.t << ',' << FormatReal(c.value.exact) << ','
        << FormatReal(c.value.closed_form) << ',' << (c.violated() ? 1 : 0) << '\n';
  }
}

}  // namespace ppack
