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

#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/walk.hpp"

namespace ppack {
namespace {

using Json = nlohmann::ordered_json;

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kParse, "bad number for " + key + ": '" + v + "'");
}

std::uint64_t ParseUnsigned(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] != '-') {
      const unsigned long long u = std::stoull(v, &used);
      if (used == v.size()) return u;
    }
  } catch (const std::exception&) {
  }
  Fail(ErrorCode::kParse, "bad unsigned integer for " + key + ": '" + v + "'");
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  Fail(ErrorCode::kParse, "bad boolean for " + key + ": '" + v + "'");
}

std::string FixedRoundingName(FixedRounding f) {
  return f == FixedRounding::kNearest ? "nearest" : "independent";
}

std::string SelectionName(EventSelection s) {
  return s == EventSelection::kLowestIndex ? "lowest" : "uniform";
}

double Median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : (v[h - 1] + v[h]) / 2.0;
}

std::string Hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

}  // namespace

std::string MethodName(Method method) {
  switch (method) {
    case Method::kRt: return "rt";
    case Method::kGreedy: return "greedy";
    case Method::kWalkLll: return "walk-lll";
    case Method::kDamped: return "damped";
  }
  return "rt";
}

Method ParseMethod(const std::string& tag) {
  if (tag == "rt") return Method::kRt;
  if (tag == "greedy") return Method::kGreedy;
  if (tag == "walk-lll") return Method::kWalkLll;
  if (tag == "damped") return Method::kDamped;
  Fail(ErrorCode::kInvalidArgument,
       "unknown method '" + tag + "' (expected rt, greedy, walk-lll, damped)");
}

void MethodConfig::Set(const std::string& key, const std::string& v) {
  if (key == "t") {
    if (v == "auto") t.reset(); else t = static_cast<int>(ParseUnsigned(key, v));
  } else if (key == "alpha") {
    alpha = ParseDouble(key, v);
  } else if (key == "epsilon") {
    epsilon = ParseDouble(key, v);
  } else if (key == "B") {
    B = ParseDouble(key, v);
  } else if (key == "seed") {
    seed = ParseUnsigned(key, v);
  } else if (key == "force") {
    force = ParseBool(key, v);
  } else if (key == "fixed_rounding") {
    if (v == "nearest") fixed_rounding = FixedRounding::kNearest;
    else if (v == "independent") fixed_rounding = FixedRounding::kIndependent;
    else Fail(ErrorCode::kParse, "fixed_rounding must be nearest or independent");
  } else if (key == "b_shift") {
    integer_b_shift = ParseBool(key, v);
  } else if (key == "load_events") {
    load_events = ParseBool(key, v);
  } else if (key == "objective_event") {
    objective_event = ParseBool(key, v);
  } else if (key == "gamma") {
    gamma = ParseDouble(key, v);
  } else if (key == "delta") {
    delta = ParseDouble(key, v);
  } else if (key == "scale") {
    scale = ParseDouble(key, v);
  } else if (key == "stop_unfixed") {
    stop_unfixed = ParseUnsigned(key, v);
  } else if (key == "max_steps") {
    max_steps = ParseUnsigned(key, v);
  } else if (key == "greedy_k") {
    greedy_k = ParseUnsigned(key, v);
  } else if (key == "max_resamples") {
    max_resamples = ParseUnsigned(key, v);
  } else if (key == "selection") {
    if (v == "lowest") selection = EventSelection::kLowestIndex;
    else if (v == "uniform") selection = EventSelection::kUniform;
    else Fail(ErrorCode::kParse, "selection must be lowest or uniform");
  } else {
    Fail(ErrorCode::kInvalidArgument, "unknown method key '" + key + "'");
  }
}

MethodResult RunMethod(const PackingInstance& instance,
                       const FractionalPoint& point, const MethodConfig& c) {
  MethodResult r;
  r.method = c.method;
  r.seed = c.seed;
  Json cfg;
  cfg["method"] = MethodName(c.method);
  cfg["seed"] = c.seed;

  if (c.method == Method::kGreedy) {
    const std::size_t k = c.greedy_k.value_or(instance.max_row_size());
    Require(k >= 1, "greedy needs k >= 1");
    r.outcome = GreedyRepair(instance, k, c.seed);
    if (point.size() > 0) {
      if (point.size() != instance.num_vars()) {
        Fail(ErrorCode::kDimensionMismatch, "point and instance sizes differ");
      }
      r.opt_fractional = Objective(instance, point.values());
    }
    r.d_measured = static_cast<std::int64_t>(BuildDependency(instance).max_degree);
    r.t_used = r.outcome.stats["cap"];
    cfg["greedy_k"] = k;
    r.config = cfg;
    return r;
  }

  const FractionalPoint x = Validate(instance, point);
  r.opt_fractional = Objective(instance, x.values());

  if (c.method == Method::kRt) {
    r.outcome = Evaluate(instance, IndependentRound(x, c.seed));
    r.d_measured = static_cast<std::int64_t>(BuildDependency(instance).max_degree);
    r.config = cfg;
    return r;
  }

  const bool damped = c.method == Method::kDamped;
  PipelineConfig pc;
  pc.walk = WalkConfig::Defaults(instance);
  if (c.delta) pc.walk.delta = *c.delta;
  if (c.gamma) pc.walk.gamma = *c.gamma;
  else if (c.delta) pc.walk.gamma = pc.walk.delta / std::max(std::log(double(instance.num_vars())), 1.5);
  if (c.scale) pc.walk.scale = *c.scale;
  if (c.stop_unfixed) pc.walk.stop_unfixed = *c.stop_unfixed;
  if (c.max_steps) pc.walk.max_steps = *c.max_steps;
  pc.error_target = c.t;
  pc.load_events = c.load_events;
  pc.objective_event = c.objective_event;
  pc.alpha = c.alpha;
  pc.epsilon = c.epsilon;
  pc.max_resamples = c.max_resamples;
  pc.seed = c.seed;
  pc.selection = c.selection;
  pc.fixed_rounding = c.fixed_rounding.value_or(damped ? FixedRounding::kIndependent
                                                       : FixedRounding::kNearest);
  pc.force = c.force;
  pc.integer_b_shift = c.integer_b_shift;

  PipelineResult p;
  double B = 0.0;
  if (damped) {
    B = c.B.value_or(instance.max_rhs());
    p = DampedRound(instance, x, B, pc);
  } else {
    p = WalkThenResample(instance, x, pc);
  }
  r.outcome = std::move(p.outcome);
  r.resamples = r.outcome.stats["resamples"];
  r.walk_steps = static_cast<std::int64_t>(p.walk_steps);
  r.d_measured = p.d_measured;
  r.t_used = p.t_used;
  r.s_used = p.s_used;
  r.guard_ok = p.guard_ok;

  cfg["t"] = c.t ? Json(*c.t) : Json("auto");
  cfg["alpha"] = pc.alpha;
  cfg["epsilon"] = pc.epsilon;
  if (damped) {
    cfg["B"] = B;
    cfg["b_shift"] = pc.integer_b_shift;
    cfg["beta"] = p.beta;
  }
  cfg["gamma"] = pc.walk.gamma;
  cfg["delta"] = pc.walk.delta;
  cfg["scale"] = damped ? p.s_used : pc.walk.scale;
  cfg["stop_unfixed"] = pc.walk.stop_unfixed;
  cfg["max_steps"] = pc.walk.max_steps;
  cfg["fixed_rounding"] = FixedRoundingName(pc.fixed_rounding);
  cfg["load_events"] = pc.load_events;
  cfg["objective_event"] = pc.objective_event;
  cfg["max_resamples"] = pc.max_resamples;
  cfg["selection"] = SelectionName(pc.selection);
  cfg["force"] = pc.force;
  r.config = cfg;
  return r;
}

Json ResultJson(const MethodResult& r) {
  Json j;
  j["method"] = MethodName(r.method);
  j["seed"] = r.seed;
  j["linf_load"] = r.outcome.linf_load;
  j["objective"] = r.outcome.objective;
  j["opt_fractional"] = r.opt_fractional;
  j["resamples"] = r.resamples;
  j["walk_steps"] = r.walk_steps;
  j["d_measured"] = r.d_measured;
  j["t_used"] = r.t_used;
  j["S_used"] = r.s_used;
  j["converged"] = r.outcome.converged;
  j["guard_ok"] = r.guard_ok;
  j["instance_fingerprint"] = Hex(r.outcome.instance_fingerprint);
  Json stats = Json::object();
  for (const auto& [k, v] : r.outcome.stats) stats[k] = v;
  j["stats"] = stats;
  j["config"] = r.config;
  return j;
}

Json Metadata() {
  Json m;
  m["tool_version"] = kToolVersion;
  m["log_base"] = kLogBase;
  m["rng"] = kRngId;
  return m;
}

ExperimentPlan ParsePlan(const std::string& text) {
  ExperimentPlan plan;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string where = "plan line " + std::to_string(lineno) + ": ";
    if (tok[0] != "cell" || tok.size() < 5) {
      Fail(ErrorCode::kParse, where + "expected 'cell <family> ... <method> ... <trials> <seedbase>'");
    }
    try {
      PlanCell cell;
      cell.spec.family = ParseFamily(tok[1]);
      std::size_t i = 2;
      for (; i < tok.size() && tok[i].find('=') != std::string::npos; ++i) {
        const auto eq = tok[i].find('=');
        const std::string key = tok[i].substr(0, eq);
        const std::string val = tok[i].substr(eq + 1);
        if (key == "m") cell.spec.m = ParseUnsigned(key, val);
        else if (key == "n") cell.spec.n = ParseUnsigned(key, val);
        else if (key == "k") cell.spec.k = ParseUnsigned(key, val);
        else if (key == "b") cell.spec.b = ParseDouble(key, val);
        else if (key == "prob") cell.spec.prob = ParseDouble(key, val);
        else if (key == "inputs") cell.spec.inputs = ParseUnsigned(key, val);
        else if (key == "seed") cell.instance_seed = ParseUnsigned(key, val);
        else if (key == "x") cell.point_value = ParseDouble(key, val);
        else Fail(ErrorCode::kParse, "unknown family key '" + key + "'");
      }
      if (i >= tok.size()) Fail(ErrorCode::kParse, "missing method");
      cell.method.method = ParseMethod(tok[i++]);
      for (; i < tok.size() && tok[i].find('=') != std::string::npos; ++i) {
        const auto eq = tok[i].find('=');
        cell.method.Set(tok[i].substr(0, eq), tok[i].substr(eq + 1));
      }
      if (tok.size() - i != 2) Fail(ErrorCode::kParse, "expected <trials> <seedbase> at the end");
      cell.trials = ParseUnsigned("trials", tok[i]);
      cell.seed_base = ParseUnsigned("seedbase", tok[i + 1]);
      GeneratorSpec probe = cell.spec;
      probe.Validate();
      plan.cells.push_back(std::move(cell));
    } catch (const Error& e) {
      Fail(e.code(), where + e.what());
    }
  }
  return plan;
}

ExperimentPlan LoadPlan(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open plan file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParsePlan(ss.str());
}

std::size_t ResolveWorkers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PPACK_WORKERS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

CellResult RunCell(const PlanCell& cell, std::size_t cell_id, std::size_t trial) {
  CellResult out;
  out.cell = cell_id;
  out.trial = trial;
  out.seed = cell.seed_base + trial;
  Json j;
  j["cell"] = cell_id;
  j["trial"] = trial;
  j["family"] = FamilyName(cell.spec.family);
  try {
    GeneratorSpec spec = cell.spec;
    spec.seed = cell.instance_seed.value_or(out.seed);
    Generated g = Generate(spec);
    FractionalPoint point;
    if (g.point) {
      point = *g.point;
    } else {
      const double v = cell.point_value.value_or(
          g.instance.max_row_size() > 0 ? 1.0 / g.instance.max_row_size() : 0.0);
      point = FractionalPoint(g.instance.num_vars(), v);
    }
    const FractionalPoint feasible = ScaleToFeasible(g.instance, point);
    MethodConfig mc = cell.method;
    mc.seed = out.seed;
    out.result = RunMethod(g.instance, feasible, mc);
    out.status = "ok";
    j["status"] = out.status;
    j["instance_seed"] = spec.seed;
    j["dropped_rows"] = g.dropped_rows;
    j["point_scaled"] = feasible.values() != point.values();
    j.update(ResultJson(*out.result));
  } catch (const Error& e) {
    out.status = "error";
    out.error = e.what();
    j["status"] = out.status;
    j["error"] = out.error;
  }
  out.json = std::move(j);
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string SummaryCsv(const ExperimentPlan& plan, const std::vector<Json>& results) {
  std::ostringstream s;
  s << "cell,family,method,trials,ok,linf_median,linf_mean,linf_max,"
       "objective_median,objective_mean,objective_max\n";
  std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_cell;
  for (const Json& j : results) {
    auto& [linf, obj] = by_cell[j.at("cell").get<std::size_t>()];
    if (j.at("status") != "ok") continue;
    linf.push_back(j.at("linf_load").get<double>());
    obj.push_back(j.at("objective").get<double>());
  }
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const auto& [linf, obj] = by_cell[c];
    auto mean = [](const std::vector<double>& v) {
      double t = 0.0;
      for (double x : v) t += x;
      return v.empty() ? 0.0 : t / v.size();
    };
    auto mx = [](const std::vector<double>& v) {
      return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    };
    s << c << ',' << FamilyName(plan.cells[c].spec.family) << ','
      << MethodName(plan.cells[c].method.method) << ',' << plan.cells[c].trials << ','
      << linf.size() << ',' << FormatReal(Median(linf)) << ',' << FormatReal(mean(linf))
      << ',' << FormatReal(mx(linf)) << ',' << FormatReal(Median(obj)) << ','
      << FormatReal(mean(obj)) << ',' << FormatReal(mx(obj)) << '\n';
  }
  return s.str();
}

PlanRun RunPlan(const ExperimentPlan& plan, const std::string& out_dir,
                std::size_t workers) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    Fail(ErrorCode::kIo, "cannot create output directory " + out_dir);
  }

  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    for (std::size_t t = 0; t < plan.cells[c].trials; ++t) jobs.emplace_back(c, t);
  }
  PlanRun run;
  run.results.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const auto [c, t] = jobs[i];
      run.results[i] = RunCell(plan.cells[c], c, t);
    }
  };
  const std::size_t nw = std::min(ResolveWorkers(workers), std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < nw; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  auto write = [&](const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    f << content;
    if (!f) Fail(ErrorCode::kIo, "cannot write " + p.string());
  };
  std::ostringstream csv;
  csv << "cell,trial,family,method,seed,status,linf_load,objective,opt_fractional,"
         "resamples,walk_steps,d_measured,t_used,S_used,converged,error\n";
  std::vector<Json> jsons;
  for (const CellResult& r : run.results) {
    const PlanCell& cell = plan.cells[r.cell];
    write(fs::path(out_dir) /
              ("cell" + std::to_string(r.cell) + "_trial" + std::to_string(r.trial) + ".json"),
          r.json.dump(2) + "\n");
    jsons.push_back(r.json);
    csv << r.cell << ',' << r.trial << ',' << FamilyName(cell.spec.family) << ','
        << MethodName(cell.method.method) << ',' << r.seed << ',' << r.status << ',';
    if (r.result) {
      const MethodResult& m = *r.result;
      csv << m.outcome.linf_load << ',' << FormatReal(m.outcome.objective) << ','
          << FormatReal(m.opt_fractional) << ',' << m.resamples << ',' << m.walk_steps
          << ',' << m.d_measured << ',' << m.t_used << ',' << FormatReal(m.s_used) << ','
          << (m.outcome.converged ? 1 : 0) << ",\n";
    } else {
      csv << ",,,,,,,,," << CsvField(r.error) << '\n';
    }
  }
  write(fs::path(out_dir) / "results.csv", csv.str());
  write(fs::path(out_dir) / "summary.csv", SummaryCsv(plan, jsons));

  Json meta = Metadata();
  meta["workers"] = nw;
  meta["cells"] = plan.cells.size();
  meta["results"] = run.results.size();
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  meta["timestamp"] = stamp;
  write(fs::path(out_dir) / "meta.json", meta.dump(2) + "\n");
  return run;
}

}  // namespace ppack
