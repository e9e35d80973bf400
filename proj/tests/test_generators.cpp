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

#include <cmath>
#include <set>

#include "core/error.hpp"
#include "core/generators.hpp"
#include "doctest.h"

using namespace ppack;

TEST_SUITE("generators") {

TEST_CASE("k-sparse rejects k above n-1") {
  CHECK_THROWS_AS(RandomKSparse(3, 4, 4, 0), Error);
  CHECK_THROWS_AS(RandomKSparse(3, 4, 1, 0), Error);
}

TEST_CASE("k-sparse rows have k strictly increasing indices") {
  const auto inst = RandomKSparse(100, 50, 5, 1);
  REQUIRE(inst.num_rows() == 100);
  for (std::size_t j = 0; j < inst.num_rows(); ++j) {
    const auto r = inst.row(j);
    REQUIRE(r.size() == 5);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1] < r[i]);
    CHECK(r.back() < 50);
  }
  CHECK(inst.HasUniformRhs(1.0));
}

TEST_CASE("k-sparse column frequency") {
  std::vector<int> hits(10, 0);
  for (Seed s = 0; s < 1000; ++s) {
    const auto inst = RandomKSparse(1, 10, 3, s);
    for (Index i : inst.row(0)) ++hits[i];
  }
  for (int h : hits) CHECK(std::abs(h / 1000.0 - 0.3) <= 0.05);
}

TEST_CASE("generation is deterministic") {
  CHECK(RandomKSparse(30, 20, 4, 5) == RandomKSparse(30, 20, 4, 5));
  CHECK_FALSE(RandomKSparse(30, 20, 4, 5) == RandomKSparse(30, 20, 4, 6));
  const auto a = RandomBernoulliSparse(200, 100, 0.1, 3);
  const auto b = RandomBernoulliSparse(200, 100, 0.1, 3);
  CHECK(a.instance == b.instance);
  CHECK(RandomButterflyRouting(8, 4).instance == RandomButterflyRouting(8, 4).instance);
}

TEST_CASE("bernoulli row sizes") {
  const auto r = RandomBernoulliSparse(200, 100, 0.1, 3);
  double total = 0.0;
  for (std::size_t j = 0; j < r.instance.num_rows(); ++j) total += r.instance.row_size(j);
  CHECK(std::abs(total / r.instance.num_rows() - 10.0) <= 1.0);
  CHECK(r.instance.num_rows() + r.dropped_rows == 200);
}

TEST_CASE("bernoulli near-zero probability drops rows") {
  const auto r = RandomBernoulliSparse(1000, 100, 1e-6, 8);
  CHECK(r.dropped_rows >= 990);
  CHECK_THROWS_AS(RandomBernoulliSparse(10, 10, 0.0, 1), Error);
  CHECK_THROWS_AS(RandomBernoulliSparse(10, 10, 1.0, 1), Error);
}

TEST_CASE("hypergraph b-matching shape and point") {
  const auto h = RandomHypergraphBMatch(6, 4, 2, 1.0, 13);
  CHECK(h.instance.num_rows() == 6);
  CHECK(h.instance.num_vars() == 4);
  std::vector<int> appearances(4, 0);
  for (std::size_t j = 0; j < 6; ++j) {
    for (Index e : h.instance.row(j)) ++appearances[e];
  }
  for (int a : appearances) CHECK(a == 2);
  for (double v : h.point.values()) CHECK(v == 0.75);
}

// With x = n/(mk) the expected vertex load equals b, so b = 1 instances are
// almost never feasible; the scaled point always is.
TEST_CASE("hypergraph point has unit mean vertex load") {
  double mean_load = 0.0;
  int feasible = 0;
  const int seeds = 100;
  for (Seed s = 0; s < seeds; ++s) {
    const auto h = RandomHypergraphBMatch(64, 64, 8, 1.0, s);
    const FeasibilityReport r = CheckFeasibility(h.instance, h.point);
    feasible += r.feasible() ? 1 : 0;
    double total = 0.0;
    for (std::size_t j = 0; j < 64; ++j) total += h.instance.row_size(j) * h.point[0];
    mean_load += total / 64.0;
    CHECK(CheckFeasibility(h.instance, ScaleToFeasible(h.instance, h.point)).feasible());
  }
  CHECK(mean_load / seeds == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(feasible < 5);
}

TEST_CASE("butterfly with two inputs") {
  const auto r = RandomButterflyRouting(2, 0);
  CHECK(r.levels == 1);
  CHECK(r.path_arcs.size() == 2);
  for (const auto& p : r.path_arcs) CHECK(p.size() == 2);
  CHECK(ButterflyPathsConsistent(r));
}

TEST_CASE("butterfly path count") {
  const auto r = RandomButterflyRouting(8, 1);
  CHECK(r.instance.num_vars() == 24);
  CHECK(r.path_arcs.size() == 24);
  for (const auto& p : r.path_arcs) CHECK(p.size() == 6);
}

TEST_CASE("butterfly point is feasible and paths are trails") {
  for (std::size_t inputs : {4, 8, 16}) {
    for (Seed s = 0; s < 20; ++s) {
      const auto r = RandomButterflyRouting(inputs, s);
      CHECK(CheckFeasibility(r.instance, r.point).feasible());
      CHECK(ButterflyPathsConsistent(r));
    }
  }
}

TEST_CASE("butterfly rejects non powers of two") {
  CHECK_THROWS_AS(RandomButterflyRouting(6, 0), Error);
  CHECK_THROWS_AS(RandomButterflyRouting(1, 0), Error);
}

TEST_CASE("family tags") {
  for (Family f : {Family::kKSparseExact, Family::kKSparseBernoulli,
                   Family::kHypergraphBMatch, Family::kButterfly}) {
    CHECK(ParseFamily(FamilyName(f)) == f);
  }
  CHECK_THROWS_AS(ParseFamily("grid"), Error);
}

TEST_CASE("generate dispatches with a point where available") {
  GeneratorSpec spec{.family = Family::kHypergraphBMatch, .m = 4, .n = 6, .k = 2, .b = 1.0};
  const Generated g = Generate(spec);
  REQUIRE(g.point.has_value());
  CHECK(g.instance.num_rows() == 6);
  spec = GeneratorSpec{.family = Family::kKSparseExact, .m = 5, .n = 9, .k = 3, .seed = 2};
  CHECK_FALSE(Generate(spec).point.has_value());
}

}  // TEST_SUITE
