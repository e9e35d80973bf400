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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "core/harness.hpp"
#include "doctest.h"

using namespace ppack;
namespace fs = std::filesystem;

namespace {

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ppack_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t Lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const char* kTwoMethods =
    "# two methods on one family\n"
    "cell k-sparse-exact m=60 n=60 k=4 seed=3 rt 3 100\n"
    "\n"
    "cell k-sparse-exact m=60 n=60 k=4 seed=3 walk-lll t=auto 3 100\n";

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("plan parsing") {
  const ExperimentPlan p = ParsePlan(kTwoMethods);
  REQUIRE(p.cells.size() == 2);
  CHECK(p.cells[0].spec.family == Family::kKSparseExact);
  CHECK(p.cells[0].spec.m == 60);
  CHECK(p.cells[0].instance_seed == Seed{3});
  CHECK(p.cells[1].method.method == Method::kWalkLll);
  CHECK_FALSE(p.cells[1].method.t.has_value());
  CHECK(p.cells[1].trials == 3);
  CHECK(p.cells[1].seed_base == 100);
  const ExperimentPlan d = ParsePlan(
      "cell hypergraph-bmatch m=32 n=32 k=4 b=2 damped b_shift=1 alpha=2 5 0\n");
  CHECK(d.cells[0].method.integer_b_shift);
  CHECK(d.cells[0].method.alpha == 2.0);
}

TEST_CASE("plan errors name the line") {
  auto code = [](const std::string& text) {
    try {
      ParsePlan(text);
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("plan line") != std::string::npos);
      return e.code();
    }
    return ErrorCode::kInternal;
  };
  CHECK(code("cell k-sparse-exact m=4 n=9 k=2 rt\n") == ErrorCode::kParse);
  CHECK(code("cell k-sparse-exact m=4 n=9 k=2 lp 1 0\n") == ErrorCode::kInvalidArgument);
  CHECK(code("cell k-sparse-exact m=4 n=9 k=2 rt bogus=1 1 0\n") == ErrorCode::kInvalidArgument);
  CHECK(code("cell k-sparse-exact m=4 n=9 zz=2 rt 1 0\n") == ErrorCode::kParse);
  CHECK(code("run something\n") == ErrorCode::kParse);
}

TEST_CASE("method names") {
  for (Method m : {Method::kRt, Method::kGreedy, Method::kWalkLll, Method::kDamped}) {
    CHECK(ParseMethod(MethodName(m)) == m);
  }
}

TEST_CASE("empty plan writes a header-only csv") {
  const fs::path dir = TempDir("empty");
  const PlanRun run = RunPlan(ParsePlan("# nothing\n"), dir.string(), 1);
  CHECK(run.results.empty());
  CHECK(Lines(Slurp(dir / "results.csv")) == 1);
  CHECK(fs::exists(dir / "meta.json"));
}

TEST_CASE("cells times trials rows and deterministic output") {
  const ExperimentPlan plan = ParsePlan(kTwoMethods);
  const fs::path a = TempDir("det_a");
  const fs::path b = TempDir("det_b");
  const PlanRun ra = RunPlan(plan, a.string(), 1);
  RunPlan(plan, b.string(), 3);
  CHECK(ra.results.size() == 6);
  CHECK(Lines(Slurp(a / "results.csv")) == 7);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string name = entry.path().filename().string();
    if (name == "meta.json") continue;
    ++files;
    CHECK_MESSAGE(Slurp(entry.path()) == Slurp(b / name), name);
  }
  CHECK(files == 6 + 2);
}

TEST_CASE("json results follow the schema") {
  const fs::path dir = TempDir("schema");
  RunPlan(ParsePlan(kTwoMethods), dir.string(), 1);
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 3; ++t) {
      const auto j = nlohmann::json::parse(
          Slurp(dir / ("cell" + std::to_string(c) + "_trial" + std::to_string(t) + ".json")));
      CHECK(j.at("status") == "ok");
      CHECK(j.at("method").is_string());
      CHECK(j.at("seed").is_number_unsigned());
      CHECK(j.at("seed") == 100 + t);
      CHECK(j.at("linf_load").is_number_integer());
      CHECK(j.at("objective").is_number());
      CHECK(j.at("opt_fractional").is_number());
      CHECK(j.at("resamples").is_number_integer());
      CHECK(j.at("walk_steps").is_number_integer());
      CHECK(j.at("d_measured").is_number_integer());
      CHECK(j.at("t_used").is_number_integer());
      CHECK(j.at("S_used").is_number());
      CHECK(j.at("converged").is_boolean());
      CHECK(j.at("config").is_object());
      CHECK(j.at("config").at("method") == j.at("method"));
    }
  }
}

TEST_CASE("summary recomputes from the json results") {
  const ExperimentPlan plan = ParsePlan(kTwoMethods);
  const fs::path dir = TempDir("summary");
  RunPlan(plan, dir.string(), 2);
  std::vector<nlohmann::ordered_json> results;
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 3; ++t) {
      results.push_back(nlohmann::ordered_json::parse(
          Slurp(dir / ("cell" + std::to_string(c) + "_trial" + std::to_string(t) + ".json"))));
    }
  }
  CHECK(SummaryCsv(plan, results) == Slurp(dir / "summary.csv"));
}

TEST_CASE("failing cells are recorded and the run continues") {
  const ExperimentPlan plan = ParsePlan(
      "cell k-sparse-exact m=50 n=50 k=5 x=0.9 rt 1 0\n"
      "cell k-sparse-exact m=50 n=50 k=5 walk-lll t=1 2 0\n"
      "cell k-sparse-exact m=50 n=50 k=5 greedy 1 0\n");
  const fs::path dir = TempDir("failing");
  const PlanRun run = RunPlan(plan, dir.string(), 1);
  REQUIRE(run.results.size() == 4);
  CHECK(run.results[0].status == "ok");
  CHECK(run.results[1].status == "error");
  CHECK(run.results[1].error.find("guard") != std::string::npos);
  CHECK(run.results[3].status == "ok");
  const std::string csv = Slurp(dir / "results.csv");
  CHECK(csv.find(",error,") != std::string::npos);
}

TEST_CASE("worker resolution") {
  CHECK(ResolveWorkers(3) == 3);
  setenv("PPACK_WORKERS", "5", 1);
  CHECK(ResolveWorkers(0) == 5);
  setenv("PPACK_WORKERS", "junk", 1);
  CHECK(ResolveWorkers(0) >= 1);
  unsetenv("PPACK_WORKERS");
}

TEST_CASE("run method records the effective config") {
  const auto inst = RandomKSparse(40, 40, 4, 1);
  const FractionalPoint x(40, 0.25);
  MethodConfig c;
  c.method = Method::kWalkLll;
  c.seed = 4;
  const MethodResult r = RunMethod(inst, x, c);
  CHECK(r.config.at("t") == "auto");
  CHECK(r.config.at("fixed_rounding") == "nearest");
  CHECK(r.config.at("delta").get<double>() > 0.0);
  const auto j = ResultJson(r);
  CHECK(j.at("t_used") == r.t_used);
  CHECK(Metadata().at("rng") == "philox4x32-10");
  CHECK(Metadata().at("log_base") == "e");
}

}  // TEST_SUITE
