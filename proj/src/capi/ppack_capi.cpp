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


#include "ppack/ppack.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core/acceptance.hpp"
#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/harness.hpp"
#include "core/instance.hpp"
#include "core/lll.hpp"
#include "core/walk.hpp"

struct ppack_instance {
  ppack::PackingInstance value;
};

struct ppack_point {
  ppack::FractionalPoint value;
};

struct ppack_outcome {
  ppack::RoundingOutcome outcome;
  std::optional<ppack::MethodResult> method;
};

struct ppack_walk {
  ppack::WalkConfig config;
  ppack::WalkResult result;
  std::size_t n = 0;
};

namespace {

thread_local std::string g_last_error;

ppack_status Record(ppack_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
ppack_status Guard(F&& body) {
  try {
    body();
    return PPACK_OK;
  } catch (const ppack::Error& e) {
    return Record(static_cast<ppack_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Record(PPACK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Record(PPACK_ERR_INTERNAL, e.what());
  }
}

void NotNull(const void* p, const char* name) {
  ppack::Require(p != nullptr, std::string(name) + " must not be null");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ppack::MethodConfig ToMethodConfig(const ppack_round_config& c) {
  ppack::MethodConfig mc;
  NotNull(c.method, "method");
  mc.method = ppack::ParseMethod(c.method);
  if (c.t > 0) mc.t = c.t;
  ppack::Require(c.t >= 0, "t must be non-negative");
  mc.alpha = c.alpha;
  mc.epsilon = c.epsilon;
  if (c.B > 0) mc.B = c.B;
  mc.seed = c.seed;
  mc.force = c.force != 0;
  if (c.extra != nullptr) {
    std::istringstream in(c.extra);
    std::string token;
    while (in >> token) {
      const auto eq = token.find('=');
      ppack::Require(eq != std::string::npos && eq > 0,
                     "expected key=value, got '" + token + "'");
      mc.Set(token.substr(0, eq), token.substr(eq + 1));
    }
  }
  return mc;
}

nlohmann::ordered_json WalkJson(const ppack_walk& w) {
  const ppack::WalkState& s = w.result.state;
  nlohmann::ordered_json j;
  j["config"] = {{"gamma", w.config.gamma},
                 {"delta", w.config.delta},
                 {"scale", w.config.scale},
                 {"stop_unfixed", w.config.stop_unfixed},
                 {"max_steps", w.config.max_steps},
                 {"seed", w.config.seed},
                 {"gamma_within_log_relation", w.config.GammaWithinLogRelation(w.n)}};
  j["steps"] = s.step_count;
  j["incomplete"] = s.incomplete;
  j["max_unfixed"] = s.MaxUnfixed();
  j["max_abs_error"] = s.MaxAbsError();
  j["num_fixed_low"] = s.num_fixed_low;
  j["num_fixed_high"] = s.num_fixed_high;
  j["num_unfixed"] = s.NumUnfixed();
  auto phases = nlohmann::ordered_json::array();
  for (const ppack::PhaseRecord& p : s.phases) {
    nlohmann::ordered_json pj = {{"phase", p.phase},
                                 {"end_step", p.end_step},
                                 {"max_abs_increment", p.max_abs_increment}};
    if (std::isfinite(p.budget)) {
      pj["budget"] = p.budget;
    } else {
      pj["budget"] = nullptr;
    }
    phases.push_back(std::move(pj));
  }
  j["phases"] = std::move(phases);
  return j;
}

std::string AcceptSuiteList() {
  std::string out;
  for (const std::string& s : ppack::AcceptanceSuites()) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace

extern "C" {

const char* ppack_last_error(void) { return g_last_error.c_str(); }

const char* ppack_version(void) { return ppack::kToolVersion; }

const char* ppack_status_name(ppack_status status) {
  switch (status) {
    case PPACK_OK: return "ok";
    case PPACK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PPACK_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case PPACK_ERR_INFEASIBLE: return "infeasible";
    case PPACK_ERR_IO: return "io";
    case PPACK_ERR_PARSE: return "parse";
    case PPACK_ERR_BUDGET_EXCEEDED: return "budget_exceeded";
    case PPACK_ERR_OVERFLOW: return "overflow";
    case PPACK_ERR_GUARD_FAILED: return "guard_failed";
    case PPACK_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void ppack_string_free(char* s) { std::free(s); }

// ---- instances ----

ppack_status ppack_instance_create(size_t n_vars, size_t num_rows, const size_t* row_offsets,
                                   const uint32_t* indices, const double* rhs,
                                   const double* weights, int lenient, ppack_instance** out) {
  return Guard([&] {
    NotNull(out, "out");
    NotNull(row_offsets, "row_offsets");
    NotNull(rhs, "rhs");
    std::vector<std::vector<ppack::Index>> rows(num_rows);
    for (size_t j = 0; j < num_rows; ++j) {
      ppack::Require(row_offsets[j] <= row_offsets[j + 1], "row_offsets must be non-decreasing");
      if (row_offsets[j + 1] > row_offsets[j]) NotNull(indices, "indices");
      rows[j].assign(indices + row_offsets[j], indices + row_offsets[j + 1]);
    }
    std::vector<double> w = weights != nullptr ? std::vector<double>(weights, weights + n_vars)
                                               : std::vector<double>(n_vars, 1.0);
    auto inst = std::make_unique<ppack_instance>();
    inst->value = ppack::PackingInstance::Create(
        n_vars, std::move(rows), std::vector<double>(rhs, rhs + num_rows), std::move(w),
        lenient != 0 ? ppack::RowPolicy::kLenient : ppack::RowPolicy::kStrict);
    *out = inst.release();
  });
}

ppack_status ppack_instance_load(const char* path, ppack_instance** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    auto inst = std::make_unique<ppack_instance>();
    inst->value = ppack::LoadInstance(path);
    *out = inst.release();
  });
}

ppack_status ppack_instance_save(const ppack_instance* inst, const char* path) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(path, "path");
    ppack::SaveInstance(path, inst->value);
  });
}

void ppack_instance_free(ppack_instance* inst) { delete inst; }

size_t ppack_instance_num_rows(const ppack_instance* inst) {
  return inst != nullptr ? inst->value.num_rows() : 0;
}

size_t ppack_instance_num_vars(const ppack_instance* inst) {
  return inst != nullptr ? inst->value.num_vars() : 0;
}

size_t ppack_instance_max_row_size(const ppack_instance* inst) {
  return inst != nullptr ? inst->value.max_row_size() : 0;
}

double ppack_instance_max_rhs(const ppack_instance* inst) {
  return inst != nullptr ? inst->value.max_rhs() : 0.0;
}

uint64_t ppack_instance_fingerprint(const ppack_instance* inst) {
  return inst != nullptr ? inst->value.fingerprint() : 0;
}

// ---- points ----

ppack_status ppack_point_create(const double* values, size_t n, ppack_point** out) {
  return Guard([&] {
    NotNull(out, "out");
    if (n > 0) NotNull(values, "values");
    auto p = std::make_unique<ppack_point>();
    p->value = ppack::FractionalPoint(std::vector<double>(values, values + n));
    *out = p.release();
  });
}

ppack_status ppack_point_load(const char* path, ppack_point** out) {
  return Guard([&] {
    NotNull(path, "path");
    NotNull(out, "out");
    auto p = std::make_unique<ppack_point>();
    p->value = ppack::LoadPoint(path);
    *out = p.release();
  });
}

ppack_status ppack_point_save(const ppack_point* point, const char* path) {
  return Guard([&] {
    NotNull(point, "point");
    NotNull(path, "path");
    ppack::SavePoint(path, point->value);
  });
}

void ppack_point_free(ppack_point* point) { delete point; }

size_t ppack_point_size(const ppack_point* point) {
  return point != nullptr ? point->value.size() : 0;
}

const double* ppack_point_values(const ppack_point* point) {
  return point != nullptr ? point->value.values().data() : nullptr;
}

int ppack_point_slack_checked(const ppack_point* point) {
  return point != nullptr && point->value.slack_checked() ? 1 : 0;
}

ppack_status ppack_validate(const ppack_instance* inst, const ppack_point* point,
                            double* max_row_sum, size_t* num_offending, ppack_point** checked) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(point, "point");
    if (point->value.size() == inst->value.num_vars()) {
      const ppack::FeasibilityReport report = ppack::CheckFeasibility(inst->value, point->value);
      if (max_row_sum != nullptr) *max_row_sum = report.max_row_sum;
      if (num_offending != nullptr) *num_offending = report.offending_rows.size();
    }
    ppack::FractionalPoint v = ppack::Validate(inst->value, point->value);
    if (checked != nullptr) {
      auto p = std::make_unique<ppack_point>();
      p->value = std::move(v);
      *checked = p.release();
    }
  });
}

ppack_status ppack_scale_to_feasible(const ppack_instance* inst, const ppack_point* point,
                                     ppack_point** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(point, "point");
    NotNull(out, "out");
    auto p = std::make_unique<ppack_point>();
    p->value = ppack::ScaleToFeasible(inst->value, point->value);
    *out = p.release();
  });
}

ppack_status ppack_objective(const ppack_instance* inst, const ppack_point* point, double* out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(point, "point");
    NotNull(out, "out");
    *out = ppack::Objective(inst->value, point->value.values());
  });
}

// ---- generators ----

void ppack_gen_spec_init(ppack_gen_spec* spec) {
  if (spec == nullptr) return;
  *spec = ppack_gen_spec{};
  spec->family = "k-sparse-exact";
  spec->b = 1.0;
}

ppack_status ppack_generate(const ppack_gen_spec* spec, ppack_instance** out,
                            ppack_point** point_out, size_t* dropped_rows) {
  return Guard([&] {
    NotNull(spec, "spec");
    NotNull(spec->family, "family");
    NotNull(out, "out");
    ppack::GeneratorSpec gs;
    gs.family = ppack::ParseFamily(spec->family);
    gs.m = spec->m;
    gs.n = spec->n;
    gs.k = spec->k;
    gs.b = spec->b;
    gs.prob = spec->prob;
    gs.inputs = spec->inputs;
    gs.seed = spec->seed;
    ppack::Generated g = ppack::Generate(gs);
    auto inst = std::make_unique<ppack_instance>();
    inst->value = std::move(g.instance);
    std::unique_ptr<ppack_point> point;
    if (g.point) {
      point = std::make_unique<ppack_point>();
      point->value = std::move(*g.point);
    }
    if (dropped_rows != nullptr) *dropped_rows = g.dropped_rows;
    if (point_out != nullptr) *point_out = point.release();
    *out = inst.release();
  });
}

// ---- walk ----

void ppack_walk_config_init(ppack_walk_config* config) {
  if (config == nullptr) return;
  *config = ppack_walk_config{};
  config->scale = 1.0;
  config->stop_unfixed = -1;
}

ppack_status ppack_walk_run(const ppack_instance* inst, const ppack_point* point,
                            const ppack_walk_config* config, const char* trace_path,
                            ppack_walk** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(point, "point");
    NotNull(config, "config");
    NotNull(out, "out");
    ppack::WalkConfig wc = ppack::WalkConfig::Defaults(inst->value);
    if (config->delta > 0) {
      wc.delta = config->delta;
      if (config->gamma <= 0) {
        wc.gamma = wc.delta / std::max(std::log(static_cast<double>(inst->value.num_vars())), 1.5);
      }
    }
    if (config->gamma > 0) wc.gamma = config->gamma;
    wc.scale = config->scale;
    if (config->stop_unfixed >= 0) wc.stop_unfixed = static_cast<std::size_t>(config->stop_unfixed);
    if (config->max_steps > 0) wc.max_steps = config->max_steps;
    wc.seed = config->seed;

    auto w = std::make_unique<ppack_walk>();
    w->config = wc;
    w->n = inst->value.num_vars();
    if (trace_path != nullptr) {
      std::ofstream trace(trace_path);
      if (!trace) ppack::Fail(ppack::ErrorCode::kIo, std::string("cannot write ") + trace_path);
      ppack::WalkTrace tracer(trace);
      w->result = ppack::WalkRound(inst->value, point->value, wc,
                                   [&](const ppack::WalkState& s) { tracer(s); });
      if (!trace) ppack::Fail(ppack::ErrorCode::kIo, std::string("write failed: ") + trace_path);
    } else {
      w->result = ppack::WalkRound(inst->value, point->value, wc);
    }
    *out = w.release();
  });
}

void ppack_walk_free(ppack_walk* walk) { delete walk; }

uint64_t ppack_walk_steps(const ppack_walk* walk) {
  return walk != nullptr ? walk->result.state.step_count : 0;
}

int ppack_walk_incomplete(const ppack_walk* walk) {
  return walk != nullptr && walk->result.state.incomplete ? 1 : 0;
}

size_t ppack_walk_max_unfixed(const ppack_walk* walk) {
  return walk != nullptr ? walk->result.state.MaxUnfixed() : 0;
}

double ppack_walk_max_abs_error(const ppack_walk* walk) {
  return walk != nullptr ? walk->result.state.MaxAbsError() : 0.0;
}

ppack_status ppack_walk_sparsified(const ppack_walk* walk, ppack_point** out) {
  return Guard([&] {
    NotNull(walk, "walk");
    NotNull(out, "out");
    auto p = std::make_unique<ppack_point>();
    p->value = walk->result.sparsified;
    *out = p.release();
  });
}

ppack_status ppack_walk_json(const ppack_walk* walk, char** json) {
  return Guard([&] {
    NotNull(walk, "walk");
    NotNull(json, "json");
    *json = CopyString(WalkJson(*walk).dump(2));
  });
}

// ---- rounding ----

void ppack_round_config_init(ppack_round_config* config) {
  if (config == nullptr) return;
  *config = ppack_round_config{};
  config->method = "walk-lll";
  config->alpha = 1.0;
  config->epsilon = 0.5;
}

ppack_status ppack_round(const ppack_instance* inst, const ppack_point* point,
                         const ppack_round_config* config, ppack_outcome** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(config, "config");
    NotNull(out, "out");
    const ppack::MethodConfig mc = ToMethodConfig(*config);
    const ppack::FractionalPoint empty;
    ppack::MethodResult r = ppack::RunMethod(inst->value, point != nullptr ? point->value : empty, mc);
    auto o = std::make_unique<ppack_outcome>();
    o->outcome = r.outcome;
    o->method = std::move(r);
    *out = o.release();
  });
}

ppack_status ppack_evaluate(const ppack_instance* inst, const uint8_t* solution, size_t n,
                            ppack_outcome** out) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(out, "out");
    if (n > 0) NotNull(solution, "solution");
    auto o = std::make_unique<ppack_outcome>();
    o->outcome = ppack::Evaluate(inst->value, std::span<const uint8_t>(solution, n));
    *out = o.release();
  });
}

void ppack_outcome_free(ppack_outcome* outcome) { delete outcome; }

int64_t ppack_outcome_linf_load(const ppack_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.linf_load : 0;
}

double ppack_outcome_objective(const ppack_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.objective : 0.0;
}

int ppack_outcome_converged(const ppack_outcome* outcome) {
  return outcome != nullptr && outcome->outcome.converged ? 1 : 0;
}

size_t ppack_outcome_size(const ppack_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.solution.size() : 0;
}

const uint8_t* ppack_outcome_solution(const ppack_outcome* outcome) {
  return outcome != nullptr ? outcome->outcome.solution.data() : nullptr;
}

ppack_status ppack_outcome_json(const ppack_outcome* outcome, char** json) {
  return Guard([&] {
    NotNull(outcome, "outcome");
    NotNull(json, "json");
    nlohmann::ordered_json j;
    if (outcome->method) {
      j = ppack::ResultJson(*outcome->method);
    } else {
      const ppack::RoundingOutcome& o = outcome->outcome;
      std::ostringstream fp;
      fp << std::hex << o.instance_fingerprint;
      j["linf_load"] = o.linf_load;
      j["objective"] = o.objective;
      j["converged"] = o.converged;
      j["instance_fingerprint"] = fp.str();
      j["stats"] = o.stats;
    }
    *json = CopyString(j.dump(2));
  });
}

ppack_status ppack_outcome_save_solution(const ppack_outcome* outcome, const char* path) {
  return Guard([&] {
    NotNull(outcome, "outcome");
    NotNull(path, "path");
    std::ofstream out(path);
    if (!out) ppack::Fail(ppack::ErrorCode::kIo, std::string("cannot write ") + path);
    ppack::WriteSolution(out, outcome->outcome.solution);
    if (!out) ppack::Fail(ppack::ErrorCode::kIo, std::string("write failed: ") + path);
  });
}

// ---- calculators ----

ppack_status ppack_phase_duration(int p, size_t n, double gamma, uint64_t* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::PhaseDuration(p, n, gamma);
  });
}

ppack_status ppack_total_steps(double B, double S, double m, double gamma, uint64_t* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::TotalSteps(B, S, m, gamma);
  });
}

ppack_status ppack_error_budget(int p, double B, double S, double n, double m, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::ErrorBudget(p, B, S, n, m);
  });
}

ppack_status ppack_absorption_probability(double start, double lo, double hi, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::AbsorptionProbability(start, lo, hi);
  });
}

ppack_status ppack_expected_absorption_steps(double a, double b, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::ExpectedAbsorptionSteps(a, b);
  });
}

ppack_status ppack_lll_error_target(uint64_t d, int* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::LllErrorTarget(d);
  });
}

ppack_status ppack_lll_error_target_tight(uint64_t d, int* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::LllErrorTargetTight(d);
  });
}

ppack_status ppack_chernoff_tail(double mean, double delta, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::ChernoffTail(mean, delta);
  });
}

ppack_status ppack_damped_scale(double m, double opt, double d, double B, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::DampedScale(m, opt, d, B);
  });
}

ppack_status ppack_damped_beta(double d, double alpha, double B, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::DampedBeta(d, alpha, B);
  });
}

ppack_status ppack_lower_bound_condition(double m, double n, double k, double t, int* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::LowerBoundCondition(m, n, k, t) ? 1 : 0;
  });
}

ppack_status ppack_sum_tail(double T, double beta, double* out) {
  return Guard([&] {
    NotNull(out, "out");
    *out = ppack::SumTail(T, beta);
  });
}

ppack_status ppack_row_hit_probability(size_t n, size_t k, size_t t, size_t target_size,
                                       double* exact, double* closed_form) {
  return Guard([&] {
    std::optional<std::size_t> target;
    if (target_size > 0) target = target_size;
    const ppack::RowHit hit = ppack::RowHitProbability(n, k, t, target);
    if (exact != nullptr) *exact = hit.exact;
    if (closed_form != nullptr) *closed_form = hit.closed_form;
  });
}

ppack_status ppack_build_dependency(const ppack_instance* inst, const uint8_t* active,
                                    size_t* max_degree, size_t* degrees) {
  return Guard([&] {
    NotNull(inst, "instance");
    std::span<const uint8_t> mask;
    if (active != nullptr) mask = std::span<const uint8_t>(active, inst->value.num_vars());
    const ppack::DependencyGraph g = ppack::BuildDependency(inst->value, mask);
    if (max_degree != nullptr) *max_degree = g.max_degree;
    if (degrees != nullptr) std::copy(g.degree.begin(), g.degree.end(), degrees);
  });
}

// ---- oracles and reports ----

ppack_status ppack_brute_force_min_load(const ppack_instance* inst, size_t support_size,
                                        int override_budget, int64_t* min_max_load,
                                        uint32_t* support) {
  return Guard([&] {
    NotNull(inst, "instance");
    const ppack::MinLoad r = ppack::BruteForceMinLoad(inst->value, support_size,
                                                      ppack::kEnumerationBudget,
                                                      override_budget != 0);
    if (min_max_load != nullptr) *min_max_load = r.min_max_load;
    if (support != nullptr) std::copy(r.support.begin(), r.support.end(), support);
  });
}

ppack_status ppack_row_hit_sweep_csv(size_t n_max, size_t k_max, char** csv,
                                     size_t* violations) {
  return Guard([&] {
    NotNull(csv, "csv");
    const std::vector<ppack::RowHitCase> cases = ppack::RowHitSweep(n_max, k_max);
    std::ostringstream out;
    ppack::WriteRowHitCsv(out, cases);
    if (violations != nullptr) {
      *violations = 0;
      for (const ppack::RowHitCase& c : cases) *violations += c.violated() ? 1 : 0;
    }
    *csv = CopyString(out.str());
  });
}

ppack_status ppack_report_csv(const ppack_instance* inst, const ppack_outcome* const* outcomes,
                              const char* const* names, size_t count, double opt_fractional,
                              double slack, char** csv) {
  return Guard([&] {
    NotNull(inst, "instance");
    NotNull(csv, "csv");
    if (count > 0) {
      NotNull(outcomes, "outcomes");
      NotNull(names, "names");
    }
    std::vector<std::pair<std::string, ppack::RoundingOutcome>> rows;
    for (size_t i = 0; i < count; ++i) {
      NotNull(outcomes[i], "outcome");
      NotNull(names[i], "name");
      rows.emplace_back(names[i], outcomes[i]->outcome);
    }
    const ppack::BoundReport report = ppack::PipelineReport(inst->value, rows, opt_fractional, slack);
    std::ostringstream out;
    ppack::WriteReportCsv(out, report);
    *csv = CopyString(out.str());
  });
}

// ---- harness ----

ppack_status ppack_run_plan(const char* plan_path, const char* out_dir, size_t workers,
                            size_t* ok_cells, size_t* failed_cells) {
  return Guard([&] {
    NotNull(plan_path, "plan_path");
    NotNull(out_dir, "out_dir");
    const ppack::PlanRun run = ppack::RunPlan(ppack::LoadPlan(plan_path), out_dir, workers);
    size_t ok = 0;
    for (const ppack::CellResult& r : run.results) ok += r.status == "ok" ? 1 : 0;
    if (ok_cells != nullptr) *ok_cells = ok;
    if (failed_cells != nullptr) *failed_cells = run.results.size() - ok;
  });
}

ppack_status ppack_accept(const char* suite, size_t workers, char** report, int* all_passed) {
  return Guard([&] {
    NotNull(suite, "suite");
    NotNull(report, "report");
    const std::vector<ppack::CriterionResult> results = ppack::RunAcceptance(suite, workers);
    std::string text;
    bool passed = true;
    for (const ppack::CriterionResult& r : results) {
      text += ppack::FormatCriterion(r);
      text += '\n';
      passed = passed && r.passed;
    }
    if (all_passed != nullptr) *all_passed = passed ? 1 : 0;
    *report = CopyString(text);
  });
}

const char* ppack_accept_suites(void) {
  static const std::string suites = AcceptSuiteList();
  return suites.c_str();
}

}  // extern "C"
