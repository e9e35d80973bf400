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

#include "core/acceptance.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/harness.hpp"
#include "core/lll.hpp"
#include "core/walk.hpp"

namespace ppack {
namespace {

constexpr double kE = std::numbers::e;

template <typename T>
std::vector<T> ParallelMap(std::size_t count, std::size_t workers,
                           const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) out[i] = fn(i);
  };
  const std::size_t nw = std::min(ResolveWorkers(workers), std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  return out;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

std::string Fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::size_t CeilLog(double n) { return static_cast<std::size_t>(std::ceil(std::log(n))); }

using Criterion = std::function<std::vector<CriterionResult>(std::size_t)>;

CriterionResult Make(const std::string& id, bool passed, const std::string& detail) {
  return {id, "", passed, detail, 0.0};
}

// A1: absorption frequency of a single walking coordinate.
std::vector<CriterionResult> Martingale(std::size_t workers) {
  const auto inst = PackingInstance::Uniform(1, {{0}}, 1.0, RowPolicy::kLenient);
  const int trials = 20000;
  bool ok = true;
  std::ostringstream d;
  for (double x : {0.1, 0.3, 0.7}) {
    const auto high = ParallelMap<int>(trials, workers, [&](std::size_t s) {
      WalkConfig c;
      c.gamma = 0.005;
      c.delta = 0.01;
      c.stop_unfixed = 0;
      c.seed = s;
      const WalkResult r = WalkRound(inst, FractionalPoint({x}), c);
      return r.state.fixed[0] == FixStatus::kFixedHigh ? 1 : 0;
    });
    double frac = 0.0;
    for (int h : high) frac += h;
    frac /= trials;
    const bool pass = std::abs(frac - x) <= 0.02;
    ok &= pass;
    d << "x'=" << x << ": high " << Fmt(frac) << (pass ? "" : " (outside)") << "; ";
  }
  d << "expected x' +- 0.02 over 20000 trials";
  return {Make("A1", ok, d.str())};
}

// A2: walk, then pure independent rounding of y' with no events.
std::vector<CriterionResult> ObjectivePreservation(std::size_t workers) {
  const std::size_t n = 512, k = 16;
  const auto inst = RandomKSparse(n, n, k, 1);
  const FractionalPoint x(n, 1.0 / (2 * k));
  const double opt = Objective(inst, x.values());
  const auto objs = ParallelMap<double>(200, workers, [&](std::size_t s) {
    PipelineConfig c;
    c.walk = WalkConfig::Defaults(inst);
    c.seed = s;
    c.load_events = false;
    c.objective_event = false;
    c.fixed_rounding = FixedRounding::kIndependent;
    return WalkThenResample(inst, x, c).outcome.objective;
  });
  double mean = 0.0;
  for (double o : objs) mean += o;
  mean /= objs.size();
  const double ratio = mean / opt;
  const bool ok = ratio >= 0.95 && ratio <= 1.05;
  return {Make("A2", ok,
               "mean objective " + Fmt(mean) + " / <c,x'> " + Fmt(opt) + " = " + Fmt(ratio) +
                   "; expected in [0.95, 1.05]")};
}

// A3: unfixed counts and accumulated error at termination.
std::vector<CriterionResult> Sparsify(std::size_t workers) {
  const std::size_t n = 4096, k = 64;
  const double cap_unfixed = 4.0 * std::log(double(n));
  struct Trial {
    std::size_t unfixed = 0;
    double error = 0.0;
    std::uint64_t steps = 0;
    bool incomplete = false;
  };
  const auto trials = ParallelMap<Trial>(20, workers, [&](std::size_t s) {
    const auto inst = RandomKSparse(n, n, k, s);
    WalkConfig c = WalkConfig::Defaults(inst);
    c.seed = s;
    const WalkResult r = WalkRound(inst, FractionalPoint(n, 1.0 / k), c);
    return Trial{r.state.MaxUnfixed(), r.state.MaxAbsError(), r.state.step_count,
                 r.state.incomplete};
  });
  int good = 0;
  double worst_error = 0.0;
  std::size_t worst_unfixed = 0;
  std::uint64_t max_steps = 0;
  for (const Trial& t : trials) {
    good += !t.incomplete && t.unfixed <= cap_unfixed && t.error <= 4.0;
    worst_error = std::max(worst_error, t.error);
    worst_unfixed = std::max(worst_unfixed, t.unfixed);
    max_steps = std::max(max_steps, t.steps);
  }
  return {Make("A3", good >= 18,
               std::to_string(good) + "/20 trials within bounds (max unfixed " +
                   std::to_string(worst_unfixed) + " <= " + Fmt(cap_unfixed) +
                   ", max |error| " + Fmt(worst_error) + " <= 4, max steps " +
                   std::to_string(max_steps) + "); expected >= 18")};
}

// A4: walk-lll against independent rounding across three sizes.
std::vector<CriterionResult> Trend(std::size_t workers) {
  int sizes_ok = 0;
  int within = 0, total = 0;
  std::ostringstream d;
  for (std::size_t n : {512, 2048, 8192}) {
    const std::size_t k = CeilLog(double(n));
    struct Pair {
      double walk = 0.0, rt = 0.0;
      bool within = false;
    };
    const auto runs = ParallelMap<Pair>(50, workers, [&](std::size_t s) {
      const auto inst = RandomKSparse(n, n, k, s);
      const FractionalPoint x(n, 1.0 / k);
      MethodConfig mc;
      mc.seed = s;
      mc.method = Method::kWalkLll;
      const MethodResult w = RunMethod(inst, x, mc);
      const RoundingOutcome rt = Evaluate(inst, IndependentRound(x, s));
      return Pair{double(w.outcome.linf_load), double(rt.linf_load),
                  w.outcome.linf_load <= LllErrorTarget(std::uint64_t(w.d_measured))};
    });
    std::vector<double> walk, rt;
    for (const Pair& p : runs) {
      walk.push_back(p.walk);
      rt.push_back(p.rt);
      within += p.within;
      ++total;
    }
    const double mw = Median(walk), mr = Median(rt);
    sizes_ok += mw <= mr;
    d << "n=" << n << " median walk-lll " << Fmt(mw) << " vs rt " << Fmt(mr) << "; ";
  }
  const double frac = double(within) / total;
  d << "sizes with walk-lll <= rt: " << sizes_ok << "/3 (need 2); within target: "
    << Fmt(100 * frac) << "% (need 90%)";
  return {Make("A4", sizes_ok >= 2 && frac >= 0.9, d.str())};
}

// A5: Moser-Tardos convergence under the guard.
std::vector<CriterionResult> Termination(std::size_t workers) {
  const std::size_t m = 256, k = 8;
  const double budget = 10.0 * m * std::log(double(m));
  struct Run {
    bool ok = false;
    std::int64_t resamples = 0;
  };
  const auto runs = ParallelMap<Run>(100, workers, [&](std::size_t s) {
    const auto inst = RandomKSparse(m, m, k, s);
    const std::uint64_t d = BuildDependency(inst).max_degree;
    LllConfig c;
    c.error_target = LllErrorTarget(d);
    c.seed = s;
    if (!LllGuardHolds(d, c.error_target)) return Run{};
    const RoundingOutcome out = MoserTardos(inst, FractionalPoint(m, 1.0 / k), c);
    const std::int64_t r = out.stats.at("resamples");
    return Run{out.converged && r <= budget, r};
  });
  int good = 0;
  std::int64_t worst = 0;
  for (const Run& r : runs) {
    good += r.ok;
    worst = std::max(worst, r.resamples);
  }
  return {Make("A5", good >= 99,
               std::to_string(good) + "/100 converged within " + Fmt(budget) +
                   " resamples (max used " + std::to_string(worst) + "); expected >= 99")};
}

// A6: measured dependency degree against the explicit-constant bound.
std::vector<CriterionResult> Degree(std::size_t workers) {
  const double m = 1024, n = 1024, k = 10;
  const double lm = std::log(m);
  const double bound = 3.0 * (m * k * lm / n + lm * lm);
  const auto degs = ParallelMap<double>(100, workers, [&](std::size_t s) {
    return double(BuildDependency(RandomKSparse(1024, 1024, 10, s)).max_degree);
  });
  int good = 0;
  for (double d : degs) good += d <= bound;
  return {Make("A6", good >= 95,
               std::to_string(good) + "/100 seeds with max degree <= " + Fmt(bound) +
                   " (largest " + Fmt(*std::max_element(degs.begin(), degs.end())) +
                   "); expected >= 95")};
}

// A7: brute-force oracle plus the exhaustive closed-form sweep.
std::vector<CriterionResult> LowerBound(std::size_t workers) {
  const std::size_t n = 12, k = 2, m = 400, t = 2;
  const bool condition = LowerBoundCondition(double(m), double(n), double(k), double(t));
  const auto loads = ParallelMap<std::int64_t>(20, workers, [&](std::size_t s) {
    return BruteForceMinLoad(RandomKSparse(m, n, k, s), 6).min_max_load;
  });
  int good = 0;
  for (std::int64_t l : loads) good += l >= static_cast<std::int64_t>(t);
  CriterionResult oracle =
      Make("A7/oracle", condition && good >= 19,
           "condition ln(m/n) > k + t ln t is " + std::string(condition ? "true" : "false") +
               "; " + std::to_string(good) + "/20 seeds with min max load >= 2; expected >= 19");

  const auto cases = RowHitSweep(64, 8);
  std::size_t violations = 0, reachable_violations = 0;
  std::ostringstream first;
  for (const RowHitCase& c : cases) {
    if (!c.violated()) continue;
    if (violations < 3) {
      first << " (n=" << c.n << ",k=" << c.k << ",t=" << c.t << ": exact " << Fmt(c.value.exact)
            << " < " << Fmt(c.value.closed_form) << ")";
    }
    ++violations;
    reachable_violations += c.t <= c.n / c.k;
  }
  CriterionResult sweep =
      Make("A7/sweep", violations == 0,
           std::to_string(violations) + " violations in " + std::to_string(cases.size()) +
               " cases; expected 0. First:" + first.str() + ". Violations with t <= n/k: " +
               std::to_string(reachable_violations));
  return {oracle, sweep};
}

// A8: damped rounding on hypergraph b-matching.
std::vector<CriterionResult> Damped(std::size_t workers) {
  struct Run {
    std::int64_t load = 0;
    double ratio = 0.0;  // objective / (OPT / (2 S))
    bool converged = false;
    bool scaled = false;
  };
  const auto runs = ParallelMap<Run>(50, workers, [&](std::size_t s) {
    const auto h = RandomHypergraphBMatch(128, 128, 8, 2.0, s);
    const FractionalPoint x = ScaleToFeasible(h.instance, h.point);
    PipelineConfig c;
    c.walk = WalkConfig::Defaults(h.instance);
    c.fixed_rounding = FixedRounding::kIndependent;
    c.seed = s;
    const PipelineResult r = DampedRound(h.instance, x, 2.0, c);
    return Run{r.outcome.linf_load, r.outcome.objective / (r.opt_fractional / (2.0 * r.s_used)),
               r.outcome.converged, x.values() != h.point.values()};
  });
  std::int64_t worst = 0;
  int scaled = 0;
  std::vector<double> ratios;
  for (const Run& r : runs) {
    worst = std::max(worst, r.load);
    ratios.push_back(r.ratio);
    scaled += r.scaled;
  }
  const double med = Median(ratios);
  return {Make("A8", worst <= 2 && med >= 1.0,
               "max vertex load " + std::to_string(worst) +
                   " (need <= 2); median objective / (OPT/(2S)) = " + Fmt(med) +
                   " (need >= 1); points scaled to feasibility: " + std::to_string(scaled) + "/50")};
}

// A9: Chernoff tail identity and the damping inequality.
std::vector<CriterionResult> Chernoff(std::size_t) {
  const double tail = ChernoffTail(1.0, kE - 1.0);
  const double err = std::abs(tail - std::exp(-1.0));
  PhiloxStream rng(2024, 11);
  int strict = 0;
  for (int i = 0; i < 1000; ++i) {
    const double d = std::floor(1.0 + rng.Uniform() * 1e6);
    const double alpha = 1.0 + rng.Uniform() * 99.0;
    const double B = 1.0 + rng.Uniform() * 19.0;
    const double beta = DampedBeta(d, alpha, B);
    strict += std::pow(beta / kE, B) > d * alpha;
  }
  return {Make("A9", err <= 1e-12 && strict == 1000,
               "|chernoff_tail(1, e-1) - 1/e| = " + Fmt(err) + " (need <= 1e-12); " +
                   std::to_string(strict) + "/1000 triples with (beta/e)^B > d alpha")};
}

// A10: greedy repair baseline.
std::vector<CriterionResult> Greedy(std::size_t workers) {
  const std::size_t n = 4096, k = 12;
  const std::int64_t cap = static_cast<std::int64_t>(std::ceil(std::log(double(n) * k / n)));
  struct Run {
    double objective = 0.0;
    std::int64_t load = 0;
  };
  const auto runs = ParallelMap<Run>(100, workers, [&](std::size_t s) {
    const RoundingOutcome out = GreedyRepair(RandomKSparse(n, n, k, s), k, s);
    return Run{out.objective, out.linf_load};
  });
  double mean = 0.0;
  std::int64_t worst = 0;
  for (const Run& r : runs) {
    mean += r.objective;
    worst = std::max(worst, r.load);
  }
  mean /= runs.size();
  const double floor = double(n) / (4.0 * k);
  return {Make("A10", mean >= floor && worst <= cap,
               "mean objective " + Fmt(mean) + " (need >= " + Fmt(floor) + "); max load " +
                   std::to_string(worst) + " (need <= " + std::to_string(cap) + ")")};
}

struct Entry {
  const char* suite;
  Criterion run;
};

const std::vector<Entry>& Registry() {
  static const std::vector<Entry> r = {
      {"martingale", Martingale}, {"objective", ObjectivePreservation},
      {"sparsify", Sparsify},     {"trend", Trend},
      {"termination", Termination}, {"degree", Degree},
      {"lowerbound", LowerBound}, {"damped", Damped},
      {"chernoff", Chernoff},     {"greedy", Greedy},
  };
  return r;
}

}  // namespace

std::vector<std::string> AcceptanceSuites() {
  std::vector<std::string> names;
  for (const Entry& e : Registry()) names.push_back(e.suite);
  names.push_back("all");
  return names;
}

std::vector<CriterionResult> RunAcceptance(const std::string& suite, std::size_t workers) {
  bool known = suite == "all";
  for (const Entry& e : Registry()) known |= suite == e.suite;
  if (!known) {
    std::string list;
    for (const std::string& s : AcceptanceSuites()) list += (list.empty() ? "" : ", ") + s;
    Fail(ErrorCode::kInvalidArgument, "unknown suite '" + suite + "'; available: " + list);
  }
  std::vector<CriterionResult> out;
  for (const Entry& e : Registry()) {
    if (suite != "all" && suite != e.suite) continue;
    const auto start = std::chrono::steady_clock::now();
    std::vector<CriterionResult> rs;
    try {
      rs = e.run(workers);
    } catch (const Error& err) {
      rs = {Make("?", false, std::string("error: ") + err.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (CriterionResult& r : rs) {
      r.suite = e.suite;
      r.seconds = secs / rs.size();
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string FormatCriterion(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS " : "FAIL ") << r.id << " [" << r.suite << "] " << r.detail << " ("
    << std::fixed;
  s.precision(1);
  s << r.seconds << " s)";
  return s.str();
}

}  // namespace ppack
