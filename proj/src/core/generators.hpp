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

#ifndef PPACK_CORE_GENERATORS_HPP_
#define PPACK_CORE_GENERATORS_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "core/instance.hpp"
#include "core/rng.hpp"

namespace ppack {

enum class Family {
  kKSparseExact,
  kKSparseBernoulli,
  kHypergraphBMatch,
  kButterfly,
};

std::string FamilyName(Family family);
// Accepts the tags k-sparse-exact, k-sparse-bernoulli, hypergraph-bmatch,
// butterfly.
Family ParseFamily(const std::string& tag);

struct GeneratorSpec {
  Family family = Family::kKSparseExact;
  std::size_t m = 0;  // rows; hyperedges for hypergraph-bmatch
  std::size_t n = 0;  // columns; vertices for hypergraph-bmatch
  std::size_t k = 0;
  double b = 1.0;
  // Entry probability for k-sparse-bernoulli; 0 means k/n.
  double prob = 0.0;
  std::size_t inputs = 0;  // butterfly width, a power of two
  Seed seed = 0;

  void Validate() const;
};

struct Generated {
  PackingInstance instance;
  // Present for the families that come with a fractional solution.
  std::optional<FractionalPoint> point;
  std::size_t dropped_rows = 0;
};

Generated Generate(const GeneratorSpec& spec);

// Each row is an independent uniform k-subset of [0, n) (Floyd sampling);
// rhs 1, unit weights. Requires 2 <= k <= n - 1.
PackingInstance RandomKSparse(std::size_t m, std::size_t n, std::size_t k,
                              Seed seed);

struct BernoulliSparse {
  PackingInstance instance;
  std::size_t dropped_rows = 0;
};

// Every entry is 1 independently with probability `prob`; empty rows are
// dropped and counted.
BernoulliSparse RandomBernoulliSparse(std::size_t m, std::size_t n, double prob,
                                      Seed seed);

struct HypergraphBMatch {
  PackingInstance instance;  // one row per vertex, one variable per hyperedge
  FractionalPoint point;     // x_e = min(1, n_vertices / (m_edges * k))
};

HypergraphBMatch RandomHypergraphBMatch(std::size_t n_vertices,
                                        std::size_t m_edges, std::size_t k,
                                        double b, Seed seed);

// Two-phase routing on an L-level butterfly with N = 2^L rows. Node (level,
// row) has id level * N + row. Every butterfly link carries a forward arc
// (level l -> l+1) and a backward arc (l+1 -> l); instance rows are the arcs
// used by at least one path.
struct ButterflyRouting {
  PackingInstance instance;
  FractionalPoint point;
  std::size_t levels = 0;
  std::size_t num_inputs = 0;
  std::size_t max_congestion = 0;
  std::vector<std::size_t> row_arc;        // instance row -> arc id
  std::vector<std::size_t> arc_from;       // arc id -> node id
  std::vector<std::size_t> arc_to;
  std::vector<std::size_t> path_source;    // level-0 node id
  std::vector<std::size_t> path_target;    // level-0 node id
  std::vector<std::size_t> path_middle;    // level-L row
  std::vector<std::vector<std::size_t>> path_arcs;
};

ButterflyRouting RandomButterflyRouting(std::size_t num_inputs, Seed seed);

// True when every path is an arc-disjoint-in-itself walk from its source to
// its target through its intermediate output, and agrees with the incidence
// rows of the instance.
bool ButterflyPathsConsistent(const ButterflyRouting& routing);

}  // namespace ppack

#endif  // PPACK_CORE_GENERATORS_HPP_
