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

#include <sstream>

#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/instance.hpp"
#include "doctest.h"

using namespace ppack;

namespace {

PackingInstance TwoRows() {
  return PackingInstance::Uniform(3, {{0, 1}, {1, 2}}, 1.0);
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_SUITE("instance") {

TEST_CASE("validate accepts a point on the boundary") {
  const auto inst = TwoRows();
  const FractionalPoint p = Validate(inst, FractionalPoint(3, 0.5));
  CHECK(p.slack_checked());
  const FeasibilityReport r = CheckFeasibility(inst, p);
  CHECK(r.feasible());
  CHECK(r.max_row_sum == doctest::Approx(1.0));
}

TEST_CASE("validate reports the offending row") {
  const auto inst = TwoRows();
  const FractionalPoint p({1.0, 1.0, 0.0});
  const FeasibilityReport r = CheckFeasibility(inst, p);
  REQUIRE_FALSE(r.feasible());
  CHECK(r.offending_rows == std::vector<std::size_t>{0});
  CHECK(r.max_row_sum == doctest::Approx(2.0));
  CHECK(CodeOf([&] { Validate(inst, p); }) == ErrorCode::kInfeasible);
  try {
    Validate(inst, p);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("rows: 0") != std::string::npos);
  }
}

TEST_CASE("validate rejects a wrong-length point") {
  CHECK(CodeOf([] { Validate(TwoRows(), FractionalPoint(4, 0.1)); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("uniform point on k-sparse rows sums to one") {
  const auto inst = RandomKSparse(8, 16, 4, 7);
  const FeasibilityReport r = CheckFeasibility(inst, FractionalPoint(16, 0.25));
  CHECK(r.feasible());
  CHECK(r.max_row_sum == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("points outside the unit cube are rejected") {
  CHECK(CodeOf([] { FractionalPoint(std::vector<double>{0.5, 1.5}); }) == ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { FractionalPoint(std::vector<double>{-0.1}); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("evaluate counts loads and objective") {
  const auto inst = TwoRows();
  const RoundingOutcome zero = Evaluate(inst, Solution{0, 0, 0});
  CHECK(zero.linf_load == 0);
  CHECK(zero.objective == 0.0);
  const RoundingOutcome two = Evaluate(inst, Solution{1, 1, 0});
  CHECK(two.linf_load == 2);
  CHECK(two.objective == 2.0);
  CHECK(two.instance_fingerprint == inst.fingerprint());

  const auto repeated = PackingInstance::Uniform(1, {{0}, {0}, {0}}, 1.0, RowPolicy::kLenient);
  const RoundingOutcome one = Evaluate(repeated, Solution{1});
  CHECK(one.linf_load == 1);
  CHECK(RowLoads(repeated, Solution{1}) == std::vector<std::int64_t>{1, 1, 1});
  CHECK(one.objective == 1.0);
}

TEST_CASE("evaluate rejects bad solutions") {
  CHECK(CodeOf([] { Evaluate(TwoRows(), Solution{1, 0}); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(CodeOf([] { Evaluate(TwoRows(), Solution{1, 2, 0}); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("evaluate is pure and bounded") {
  const auto inst = RandomKSparse(40, 30, 5, 11);
  PhiloxStream rng(3);
  double wsum = 0.0;
  for (double w : inst.weights()) wsum += w;
  for (int trial = 0; trial < 50; ++trial) {
    Solution s(30);
    for (auto& v : s) v = rng.Below(2);
    const RoundingOutcome a = Evaluate(inst, s);
    const RoundingOutcome b = Evaluate(inst, s);
    CHECK(a.linf_load == b.linf_load);
    CHECK(a.objective == b.objective);
    CHECK(a.objective <= wsum + 1e-12);
    CHECK(a.linf_load <= static_cast<std::int64_t>(inst.max_row_size()));
  }
}

TEST_CASE("strict policy enforces row sizes") {
  CHECK(CodeOf([] { PackingInstance::Uniform(3, {{0}}, 1.0); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { PackingInstance::Uniform(3, {{0, 1, 2}}, 1.0); }) ==
        ErrorCode::kInvalidArgument);
  CHECK_NOTHROW(PackingInstance::Uniform(3, {{0}}, 1.0, RowPolicy::kLenient));
}

TEST_CASE("construction rejects duplicates and out-of-range columns") {
  CHECK(CodeOf([] { PackingInstance::Uniform(4, {{1, 1}}, 1.0); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(CodeOf([] { PackingInstance::Uniform(4, {{1, 4}}, 1.0); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("weights are normalized by their maximum") {
  const auto inst = PackingInstance::Create(3, {{0, 1}}, {1.0}, {2.0, 4.0, 1.0});
  CHECK(inst.weights() == std::vector<double>{0.5, 1.0, 0.25});
  CHECK(inst.weight_scale() == 4.0);
  CHECK(inst.weight_floor() == 4.0);
  double min_w = 1.0;
  for (double w : inst.weights()) min_w = std::min(min_w, w);
  CHECK(min_w >= 1.0 / inst.weight_floor());
}

TEST_CASE("rows are sorted on construction") {
  const auto inst = PackingInstance::Uniform(5, {{3, 0, 2}}, 2.0);
  const auto r = inst.row(0);
  CHECK(std::vector<Index>(r.begin(), r.end()) == std::vector<Index>{0, 2, 3});
}

TEST_CASE("column index inverts the rows") {
  const auto inst = PackingInstance::Uniform(3, {{0, 1}, {1, 2}, {0, 2}}, 1.0);
  const auto& cols = inst.columns();
  auto rows_of = [&](Index c) {
    auto s = cols.RowsOf(c);
    return std::vector<Index>(s.begin(), s.end());
  };
  CHECK(rows_of(0) == std::vector<Index>{0, 2});
  CHECK(rows_of(1) == std::vector<Index>{0, 1});
  CHECK(rows_of(2) == std::vector<Index>{1, 2});
}

TEST_CASE("instance text round trip") {
  const auto inst = PackingInstance::Create(
      6, {{0, 3, 5}, {1, 2}, {2, 4, 5}}, {1.0, 2.5, 0.125}, {0.3, 1.0, 0.7, 0.25, 0.5, 0.9});
  std::stringstream s;
  WriteInstance(s, inst);
  const PackingInstance back = ReadInstance(s);
  CHECK(back == inst);
  CHECK(back.fingerprint() == inst.fingerprint());
}

TEST_CASE("generated instance round trip") {
  const auto inst = RandomKSparse(50, 40, 6, 99);
  std::stringstream s;
  WriteInstance(s, inst);
  CHECK(ReadInstance(s) == inst);
}

TEST_CASE("point and solution round trip") {
  const FractionalPoint p({0.1, 0.333333333333, 1.0, 0.0});
  std::stringstream s;
  WritePoint(s, p);
  CHECK(ReadPoint(s).values() == p.values());
  std::stringstream t;
  WriteSolution(t, Solution{1, 0, 1});
  CHECK(ReadSolution(t) == Solution{1, 0, 1});
}

TEST_CASE("malformed files raise parse errors") {
  std::stringstream bad("ppack 1 2\nrhs 1\nw 1 1\nrow 0 0 7\n");
  CHECK(CodeOf([&] { ReadInstance(bad); }) == ErrorCode::kParse);
  std::stringstream truncated("ppack 2 2\nrhs 1 1\nw 1 1\nrow 0 0 1\n");
  CHECK(CodeOf([&] { ReadInstance(truncated); }) == ErrorCode::kParse);
  std::stringstream sol("sol 2\n0 3\n");
  CHECK(CodeOf([&] { ReadSolution(sol); }) == ErrorCode::kParse);
}

TEST_CASE("scale to feasible") {
  const auto inst = TwoRows();
  const FractionalPoint p = ScaleToFeasible(inst, FractionalPoint({1.0, 1.0, 1.0}));
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(CheckFeasibility(inst, p).feasible());
  const FractionalPoint q({0.2, 0.3, 0.1});
  CHECK(ScaleToFeasible(inst, q).values() == q.values());
}

}  // TEST_SUITE
