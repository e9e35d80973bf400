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


// ppack command-line front end. Talks to the library only through ppack.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppack/ppack.h"

namespace {

// Thrown on any non-OK status; carries the library's message.
struct CliError {
  ppack_status status;
  std::string message;
};

void Check(ppack_status s) {
  if (s != PPACK_OK) throw CliError{s, ppack_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
  T** out() { return &p; }
};

using Instance = Handle<ppack_instance, ppack_instance_free>;
using Point = Handle<ppack_point, ppack_point_free>;
using Outcome = Handle<ppack_outcome, ppack_outcome_free>;
using Walk = Handle<ppack_walk, ppack_walk_free>;

std::string TakeString(char* s) {
  std::string out = s != nullptr ? s : "";
  ppack_string_free(s);
  return out;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw CliError{PPACK_ERR_IO, "cannot write " + path};
}

struct GenArgs {
  ppack_gen_spec spec{};
  std::string family = "k-sparse-exact";
  std::string out;
};

struct WalkArgs {
  ppack_walk_config config{};
  std::string in, frac, trace, json, sparsified;
};

struct RoundArgs {
  ppack_round_config config{};
  std::string method = "walk-lll";
  std::string in, frac, json, solution;
  std::vector<std::string> extra;
};

struct AnalyzeArgs {
  std::string mode;
  double m = 0, n = 0, k = 0, t = 0;
  std::size_t n_max = 60, k_max = 12;
  std::string in, frac, out;
  std::size_t support = 0;
  bool override_budget = false;
  std::vector<std::string> methods{"rt", "greedy", "walk-lll"};
  std::uint64_t seed = 1;
  double slack = 1.0;
};

struct SweepArgs {
  std::string plan, out;
  std::size_t workers = 0;
};

struct AcceptArgs {
  std::string suite = "all";
  std::size_t workers = 0;
};

int RunGen(GenArgs& a) {
  a.spec.family = a.family.c_str();
  Instance inst;
  Point point;
  std::size_t dropped = 0;
  Check(ppack_generate(&a.spec, inst.out(), point.out(), &dropped));
  Check(ppack_instance_save(inst.p, a.out.c_str()));
  if (point.p != nullptr) Check(ppack_point_save(point.p, (a.out + ".frac").c_str()));
  std::printf("rows=%zu vars=%zu max_row_size=%zu dropped_rows=%zu fingerprint=%016llx\n",
              ppack_instance_num_rows(inst.p), ppack_instance_num_vars(inst.p),
              ppack_instance_max_row_size(inst.p), dropped,
              static_cast<unsigned long long>(ppack_instance_fingerprint(inst.p)));
  return 0;
}

int RunWalk(WalkArgs& a) {
  Instance inst;
  Point point;
  Walk walk;
  Check(ppack_instance_load(a.in.c_str(), inst.out()));
  Check(ppack_point_load(a.frac.c_str(), point.out()));
  Check(ppack_walk_run(inst.p, point.p, &a.config, a.trace.empty() ? nullptr : a.trace.c_str(),
                       walk.out()));
  char* json = nullptr;
  Check(ppack_walk_json(walk.p, &json));
  Emit(TakeString(json), a.json);
  if (!a.sparsified.empty()) {
    Point sparse;
    Check(ppack_walk_sparsified(walk.p, sparse.out()));
    Check(ppack_point_save(sparse.p, a.sparsified.c_str()));
  }
  return ppack_walk_incomplete(walk.p) ? 3 : 0;
}

int RunRound(RoundArgs& a) {
  Instance inst;
  Point point;
  Check(ppack_instance_load(a.in.c_str(), inst.out()));
  if (!a.frac.empty()) Check(ppack_point_load(a.frac.c_str(), point.out()));
  std::string extra;
  for (const std::string& e : a.extra) extra += e + ' ';
  a.config.method = a.method.c_str();
  a.config.extra = extra.c_str();
  Outcome outcome;
  Check(ppack_round(inst.p, point.p, &a.config, outcome.out()));
  char* json = nullptr;
  Check(ppack_outcome_json(outcome.p, &json));
  Emit(TakeString(json), a.json);
  if (!a.solution.empty()) Check(ppack_outcome_save_solution(outcome.p, a.solution.c_str()));
  return ppack_outcome_converged(outcome.p) ? 0 : 3;
}

int RunAnalyze(const AnalyzeArgs& a) {
  if (a.mode == "lowerbound") {
    if (a.m > 0) {
      int holds = 0;
      Check(ppack_lower_bound_condition(a.m, a.n, a.k, a.t, &holds));
      double exact = 0, closed = 0;
      Check(ppack_row_hit_probability(static_cast<std::size_t>(a.n),
                                      static_cast<std::size_t>(a.k),
                                      static_cast<std::size_t>(a.t), 0, &exact, &closed));
      std::printf("condition=%s row_hit_exact=%.12g row_hit_closed_form=%.12g\n",
                  holds ? "holds" : "fails", exact, closed);
      return 0;
    }
    char* csv = nullptr;
    std::size_t violations = 0;
    Check(ppack_row_hit_sweep_csv(a.n_max, a.k_max, &csv, &violations));
    Emit(TakeString(csv), a.out);
    std::fprintf(stderr, "violations=%zu\n", violations);
    return 0;
  }

  Instance inst;
  Check(ppack_instance_load(a.in.c_str(), inst.out()));

  if (a.mode == "oracle") {
    std::vector<std::uint32_t> support(a.support);
    std::int64_t load = 0;
    Check(ppack_brute_force_min_load(inst.p, a.support, a.override_budget ? 1 : 0, &load,
                                     support.data()));
    std::printf("min_max_load=%lld support=", static_cast<long long>(load));
    for (std::size_t i = 0; i < support.size(); ++i) {
      std::printf("%s%u", i ? "," : "", support[i]);
    }
    std::printf("\n");
    return 0;
  }

  // report
  Point point;
  Check(ppack_point_load(a.frac.c_str(), point.out()));
  double opt = 0;
  Check(ppack_objective(inst.p, point.p, &opt));
  std::vector<Outcome> outcomes(a.methods.size());
  std::vector<const ppack_outcome*> ptrs;
  std::vector<const char*> names;
  for (std::size_t i = 0; i < a.methods.size(); ++i) {
    ppack_round_config rc;
    ppack_round_config_init(&rc);
    rc.method = a.methods[i].c_str();
    rc.seed = a.seed;
    Check(ppack_round(inst.p, point.p, &rc, outcomes[i].out()));
    ptrs.push_back(outcomes[i].p);
    names.push_back(a.methods[i].c_str());
  }
  char* csv = nullptr;
  Check(ppack_report_csv(inst.p, ptrs.data(), names.data(), ptrs.size(), opt, a.slack, &csv));
  Emit(TakeString(csv), a.out);
  return 0;
}

int RunSweep(const SweepArgs& a) {
  std::size_t ok = 0, failed = 0;
  Check(ppack_run_plan(a.plan.c_str(), a.out.c_str(), a.workers, &ok, &failed));
  std::printf("trials_ok=%zu trials_failed=%zu out=%s\n", ok, failed, a.out.c_str());
  return failed == 0 ? 0 : 3;
}

int RunAccept(const AcceptArgs& a) {
  char* report = nullptr;
  int passed = 0;
  Check(ppack_accept(a.suite.c_str(), a.workers, &report, &passed));
  std::cout << TakeString(report);
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized rounding for sparse 0-1 packing programs"};
  app.set_version_flag("--version", std::string(ppack_version()));
  app.require_subcommand(1);

  GenArgs gen;
  ppack_gen_spec_init(&gen.spec);
  auto* g = app.add_subcommand("gen", "Generate an instance (and a .frac point when available)");
  g->add_option("--family", gen.family, "k-sparse-exact | k-sparse-bernoulli | hypergraph-bmatch | butterfly")
      ->capture_default_str();
  g->add_option("--m", gen.spec.m, "Rows (hyperedges for hypergraph-bmatch)");
  g->add_option("--n", gen.spec.n, "Columns (vertices for hypergraph-bmatch)");
  g->add_option("--k", gen.spec.k, "Nonzeros per column or hyperedge size");
  g->add_option("--b", gen.spec.b, "Right-hand side")->capture_default_str();
  g->add_option("--prob", gen.spec.prob, "Bernoulli density; 0 means k/n");
  g->add_option("--inputs", gen.spec.inputs, "Butterfly width");
  g->add_option("--seed", gen.spec.seed, "Seed")->capture_default_str();
  g->add_option("--out", gen.out, "Instance path")->required();

  WalkArgs walk;
  ppack_walk_config_init(&walk.config);
  auto* w = app.add_subcommand("walk", "Run the sparsifying random walk");
  w->add_option("--in", walk.in, "Instance path")->required();
  w->add_option("--frac", walk.frac, "Fractional point path")->required();
  w->add_option("--gamma", walk.config.gamma, "Step scale; default delta / ln n");
  w->add_option("--delta", walk.config.delta, "Fixing margin; default 1 / (ln n)^2");
  w->add_option("--scale", walk.config.scale, "Start from point / scale")->capture_default_str();
  w->add_option("--stop-unfixed", walk.config.stop_unfixed,
                "Stop when every row has at most this many unfixed variables; default ceil(ln m)");
  w->add_option("--max-steps", walk.config.max_steps, "Step limit; 0 means 10^7");
  w->add_option("--seed", walk.config.seed, "Seed")->capture_default_str();
  w->add_option("--trace", walk.trace, "Per-step CSV trace path");
  w->add_option("--json", walk.json, "Summary path; stdout when omitted");
  w->add_option("--sparsified", walk.sparsified, "Write the walk's final point here");

  RoundArgs round;
  ppack_round_config_init(&round.config);
  auto* r = app.add_subcommand("round", "Round a fractional point to a 0-1 solution");
  r->add_option("--method", round.method, "rt | greedy | walk-lll | damped")->capture_default_str();
  r->add_option("--in", round.in, "Instance path")->required();
  r->add_option("--frac", round.frac, "Fractional point path (optional for greedy)");
  r->add_option("--t", round.config.t, "Error target; 0 means auto");
  r->add_option("--alpha", round.config.alpha, "Objective event weight")->capture_default_str();
  r->add_option("--epsilon", round.config.epsilon, "Objective slack")->capture_default_str();
  r->add_option("--B", round.config.B, "Right-hand side for damped; default max rhs");
  r->add_option("--seed", round.config.seed, "Seed")->capture_default_str();
  r->add_flag("--force", round.config.force, "Resample even when the guard fails");
  r->add_option("--set", round.extra, "Extra key=value setting (repeatable)");
  r->add_option("--json", round.json, "Result path; stdout when omitted");
  r->add_option("--solution", round.solution, "Write the 0-1 solution here");

  AnalyzeArgs an;
  auto* a = app.add_subcommand("analyze", "Bounds, exhaustive oracle and method reports");
  a->add_option("--mode", an.mode, "lowerbound | oracle | report")
      ->required()
      ->check(CLI::IsMember({"lowerbound", "oracle", "report"}));
  a->add_option("--m", an.m, "lowerbound: rows");
  a->add_option("--n", an.n, "lowerbound: columns");
  a->add_option("--k", an.k, "lowerbound: nonzeros per column");
  a->add_option("--t", an.t, "lowerbound: load threshold");
  a->add_option("--n-max", an.n_max, "lowerbound sweep: largest n")->capture_default_str();
  a->add_option("--k-max", an.k_max, "lowerbound sweep: largest k")->capture_default_str();
  a->add_option("--in", an.in, "oracle/report: instance path");
  a->add_option("--frac", an.frac, "report: fractional point path");
  a->add_option("--support", an.support, "oracle: support size");
  a->add_flag("--override-budget", an.override_budget, "oracle: ignore the enumeration budget");
  a->add_option("--methods", an.methods, "report: methods to compare")->capture_default_str();
  a->add_option("--seed", an.seed, "report: seed")->capture_default_str();
  a->add_option("--slack", an.slack, "report: slack factor")->capture_default_str();
  a->add_option("--out", an.out, "CSV path; stdout when omitted");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run an experiment plan");
  s->add_option("--plan", sweep.plan, "Plan file")->required();
  s->add_option("--out", sweep.out, "Output directory")->required();
  s->add_option("--workers", sweep.workers, "Worker threads; default PPACK_WORKERS or all cores");

  AcceptArgs accept;
  auto* ac = app.add_subcommand("accept", "Run acceptance criteria");
  ac->add_option("--suite", accept.suite, std::string("One of: ") + ppack_accept_suites())
      ->capture_default_str();
  ac->add_option("--workers", accept.workers, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return RunGen(gen);
    if (w->parsed()) return RunWalk(walk);
    if (r->parsed()) return RunRound(round);
    if (a->parsed()) {
      if (an.mode != "lowerbound" && an.in.empty()) throw CliError{PPACK_ERR_INVALID_ARGUMENT, "--in is required"};
      if (an.mode == "oracle" && an.support == 0) throw CliError{PPACK_ERR_INVALID_ARGUMENT, "--support is required"};
      if (an.mode == "report" && an.frac.empty()) throw CliError{PPACK_ERR_INVALID_ARGUMENT, "--frac is required"};
      return RunAnalyze(an);
    }
    if (s->parsed()) return RunSweep(sweep);
    if (ac->parsed()) return RunAccept(accept);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", ppack_status_name(e.status), e.message.c_str());
    return 2;
  }
  return 0;
}
