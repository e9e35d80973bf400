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

#include "core/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/error.hpp"

namespace ppack {
namespace {

// Distinct stream ids keep families with equal seeds uncorrelated.
constexpr std::uint64_t kStreamKSparse = 1;
constexpr std::uint64_t kStreamBernoulli = 2;
constexpr std::uint64_t kStreamHypergraph = 3;
constexpr std::uint64_t kStreamButterfly = 4;

// Floyd's algorithm: a uniform k-subset of [0, n), returned sorted.
std::vector<Index> SampleSubset(std::size_t n, std::size_t k, PhiloxStream& rng) {
  std::vector<Index> chosen;
  chosen.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<Index>(rng.Below(j + 1));
    const auto pos = std::lower_bound(chosen.begin(), chosen.end(), t);
    if (pos != chosen.end() && *pos == t) {
      chosen.insert(std::lower_bound(chosen.begin(), chosen.end(), Index(j)),
                    static_cast<Index>(j));
    } else {
      chosen.insert(pos, t);
    }
  }
  return chosen;
}

bool IsPowerOfTwo(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

std::string FamilyName(Family family) {
  switch (family) {
    case Family::kKSparseExact: return "k-sparse-exact";
    case Family::kKSparseBernoulli: return "k-sparse-bernoulli";
    case Family::kHypergraphBMatch: return "hypergraph-bmatch";
    case Family::kButterfly: return "butterfly";
  }
  return "unknown";
}

Family ParseFamily(const std::string& tag) {
  for (Family f : {Family::kKSparseExact, Family::kKSparseBernoulli,
                   Family::kHypergraphBMatch, Family::kButterfly}) {
    if (FamilyName(f) == tag) return f;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown family '" + tag +
           "' (expected k-sparse-exact, k-sparse-bernoulli, hypergraph-bmatch, butterfly)");
}

void GeneratorSpec::Validate() const {
  switch (family) {
    case Family::kKSparseExact:
      Require(m >= 1 && n >= 1, "k-sparse-exact needs m, n >= 1");
      Require(k >= 2 && k + 1 <= n, "k-sparse-exact needs 2 <= k <= n-1");
      break;
    case Family::kKSparseBernoulli:
      Require(m >= 1 && n >= 1, "k-sparse-bernoulli needs m, n >= 1");
      if (prob == 0.0) {
        Require(k >= 1 && k < n, "k-sparse-bernoulli needs 1 <= k < n when prob is unset");
      } else {
        Require(prob > 0.0 && prob < 1.0, "prob must lie in (0, 1)");
      }
      break;
    case Family::kHypergraphBMatch:
      Require(m >= 1 && n >= 1, "hypergraph-bmatch needs vertices and edges >= 1");
      Require(k >= 1 && k <= n, "hypergraph-bmatch needs 1 <= k <= n_vertices");
      Require(b >= 1.0, "hypergraph-bmatch needs b >= 1");
      break;
    case Family::kButterfly:
      Require(inputs >= 2 && IsPowerOfTwo(inputs),
              "butterfly input count must be a power of two >= 2");
      break;
  }
}

Generated Generate(const GeneratorSpec& spec) {
  spec.Validate();
  Generated g;
  switch (spec.family) {
    case Family::kKSparseExact:
      g.instance = RandomKSparse(spec.m, spec.n, spec.k, spec.seed);
      break;
    case Family::kKSparseBernoulli: {
      const double p = spec.prob > 0.0 ? spec.prob
                                       : static_cast<double>(spec.k) / spec.n;
      auto r = RandomBernoulliSparse(spec.m, spec.n, p, spec.seed);
      g.instance = std::move(r.instance);
      g.dropped_rows = r.dropped_rows;
      break;
    }
    case Family::kHypergraphBMatch: {
      auto r = RandomHypergraphBMatch(spec.n, spec.m, spec.k, spec.b, spec.seed);
      g.instance = std::move(r.instance);
      g.point = std::move(r.point);
      break;
    }
    case Family::kButterfly: {
      auto r = RandomButterflyRouting(spec.inputs, spec.seed);
      g.instance = std::move(r.instance);
      g.point = std::move(r.point);
      break;
    }
  }
  return g;
}

PackingInstance RandomKSparse(std::size_t m, std::size_t n, std::size_t k,
                              Seed seed) {
  GeneratorSpec{.family = Family::kKSparseExact, .m = m, .n = n, .k = k}.Validate();
  PhiloxStream rng(seed, kStreamKSparse);
  std::vector<std::vector<Index>> rows;
  rows.reserve(m);
  for (std::size_t j = 0; j < m; ++j) rows.push_back(SampleSubset(n, k, rng));
  return PackingInstance::Uniform(n, std::move(rows), 1.0, RowPolicy::kStrict);
}

BernoulliSparse RandomBernoulliSparse(std::size_t m, std::size_t n, double prob,
                                      Seed seed) {
  GeneratorSpec{.family = Family::kKSparseBernoulli, .m = m, .n = n, .prob = prob}
      .Validate();
  PhiloxStream rng(seed, kStreamBernoulli);
  BernoulliSparse out;
  std::vector<std::vector<Index>> rows;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Index> row;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.Uniform() < prob) row.push_back(static_cast<Index>(i));
    }
    if (row.empty()) {
      ++out.dropped_rows;
    } else {
      rows.push_back(std::move(row));
    }
  }
  out.instance = PackingInstance::Uniform(n, std::move(rows), 1.0, RowPolicy::kLenient);
  return out;
}

HypergraphBMatch RandomHypergraphBMatch(std::size_t n_vertices,
                                        std::size_t m_edges, std::size_t k,
                                        double b, Seed seed) {
  GeneratorSpec{.family = Family::kHypergraphBMatch, .m = m_edges, .n = n_vertices,
                .k = k, .b = b}
      .Validate();
  PhiloxStream rng(seed, kStreamHypergraph);
  std::vector<std::vector<Index>> incident(n_vertices);
  for (std::size_t e = 0; e < m_edges; ++e) {
    for (Index v : SampleSubset(n_vertices, k, rng)) {
      incident[v].push_back(static_cast<Index>(e));
    }
  }
  std::vector<double> rhs(n_vertices, b);
  auto inst = PackingInstance::Create(m_edges, std::move(incident), std::move(rhs),
                                      std::vector<double>(m_edges, 1.0),
                                      RowPolicy::kLenient);
  const double x = std::min(
      1.0, static_cast<double>(n_vertices) / (static_cast<double>(m_edges) * k));
  return {std::move(inst), FractionalPoint(m_edges, x)};
}

ButterflyRouting RandomButterflyRouting(std::size_t num_inputs, Seed seed) {
  GeneratorSpec{.family = Family::kButterfly, .inputs = num_inputs}.Validate();
  const std::size_t N = num_inputs;
  std::size_t L = 0;
  while ((std::size_t{1} << L) < N) ++L;

  ButterflyRouting out;
  out.levels = L;
  out.num_inputs = N;

  // Forward link id f = (l * N + row) * 2 + cross, joining (l, row) with
  // (l + 1, row ^ (cross << l)). Backward arcs reuse the link at id f + 2NL.
  const std::size_t links = 2 * N * L;
  out.arc_from.resize(2 * links);
  out.arc_to.resize(2 * links);
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t row = 0; row < N; ++row) {
      for (std::size_t cross = 0; cross < 2; ++cross) {
        const std::size_t f = (l * N + row) * 2 + cross;
        const std::size_t upper = l * N + row;
        const std::size_t lower = (l + 1) * N + (row ^ (cross << l));
        out.arc_from[f] = upper;
        out.arc_to[f] = lower;
        out.arc_from[f + links] = lower;
        out.arc_to[f + links] = upper;
      }
    }
  }

  PhiloxStream rng(seed, kStreamButterfly);
  const std::size_t num_paths = N * L;
  std::vector<std::size_t> targets(num_paths);
  for (std::size_t p = 0; p < num_paths; ++p) targets[p] = p / L;
  for (std::size_t p = num_paths; p > 1; --p) {
    std::swap(targets[p - 1], targets[rng.Below(p)]);
  }

  std::vector<std::vector<Index>> arc_paths(2 * links);
  for (std::size_t p = 0; p < num_paths; ++p) {
    const std::size_t source = p / L;
    const std::size_t middle = rng.Below(N);
    const std::size_t target = targets[p];
    std::vector<std::size_t> arcs;
    arcs.reserve(2 * L);
    std::size_t cur = source;
    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t bit = std::size_t{1} << l;
      const std::size_t next = (cur & ~bit) | (middle & bit);
      arcs.push_back((l * N + cur) * 2 + (next != cur ? 1 : 0));
      cur = next;
    }
    for (std::size_t l = L; l-- > 0;) {
      const std::size_t bit = std::size_t{1} << l;
      const std::size_t next = (cur & ~bit) | (target & bit);
      arcs.push_back(links + (l * N + next) * 2 + (next != cur ? 1 : 0));
      cur = next;
    }
    for (std::size_t a : arcs) arc_paths[a].push_back(static_cast<Index>(p));
    out.path_source.push_back(source);
    out.path_target.push_back(target);
    out.path_middle.push_back(middle);
    out.path_arcs.push_back(std::move(arcs));
  }

  std::vector<std::vector<Index>> rows;
  for (std::size_t a = 0; a < arc_paths.size(); ++a) {
    if (arc_paths[a].empty()) continue;
    out.max_congestion = std::max(out.max_congestion, arc_paths[a].size());
    out.row_arc.push_back(a);
    rows.push_back(std::move(arc_paths[a]));
  }
  out.instance = PackingInstance::Uniform(num_paths, std::move(rows), 1.0,
                                          RowPolicy::kLenient);
  const std::size_t c = (out.max_congestion + L - 1) / L;
  out.point = FractionalPoint(num_paths, 1.0 / static_cast<double>(c * L));
  return out;
}

bool ButterflyPathsConsistent(const ButterflyRouting& r) {
  const std::size_t N = r.num_inputs;
  const std::size_t L = r.levels;
  std::vector<std::set<std::size_t>> arcs_of_path(r.path_arcs.size());
  for (std::size_t p = 0; p < r.path_arcs.size(); ++p) {
    const auto& arcs = r.path_arcs[p];
    if (arcs.size() != 2 * L) return false;
    std::size_t node = r.path_source[p];
    for (std::size_t s = 0; s < arcs.size(); ++s) {
      const std::size_t a = arcs[s];
      if (a >= r.arc_from.size() || r.arc_from[a] != node) return false;
      node = r.arc_to[a];
      if (s + 1 == L && node != L * N + r.path_middle[p]) return false;
      if (!arcs_of_path[p].insert(a).second) return false;
    }
    if (node != r.path_target[p]) return false;
  }
  if (r.row_arc.size() != r.instance.num_rows()) return false;
  for (std::size_t j = 0; j < r.instance.num_rows(); ++j) {
    for (Index p : r.instance.row(j)) {
      if (!arcs_of_path[p].count(r.row_arc[j])) return false;
    }
  }
  std::size_t incidences = 0;
  for (const auto& s : arcs_of_path) incidences += s.size();
  return incidences == r.instance.num_nonzeros();
}

}  // namespace ppack
