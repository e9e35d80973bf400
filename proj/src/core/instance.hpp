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

#ifndef PPACK_CORE_INSTANCE_HPP_
#define PPACK_CORE_INSTANCE_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ppack {

using Index = std::uint32_t;

inline constexpr double kFeasibilityTolerance = 1e-9;

// Strict rejects rows with fewer than 2 or more than n-1 variables; lenient
// keeps them so degenerate fixtures (single-variable rows, empty instances)
// remain expressible.
enum class RowPolicy { kStrict, kLenient };

// Column-to-rows inverted index in CSR form.
struct ColumnIndex {
  std::vector<std::size_t> offsets;
  std::vector<Index> rows;

  std::span<const Index> RowsOf(Index column) const {
    return {rows.data() + offsets[column], offsets[column + 1] - offsets[column]};
  }
};

// A 0-1 packing system  max <c, x>  s.t.  A x <= rhs,  x in {0,1}^n.
// Immutable after construction; the inverted column index is built on first
// use under std::call_once, so instances can be shared across threads.
class PackingInstance {
 public:
  PackingInstance() = default;

  // Rows are index lists into [0, n_vars); each list is sorted on the way in
  // and duplicates are rejected. Weights are divided by their maximum.
  static PackingInstance Create(std::size_t n_vars,
                                std::vector<std::vector<Index>> rows,
                                std::vector<double> rhs,
                                std::vector<double> weights,
                                RowPolicy policy = RowPolicy::kStrict);

  // Unit weights, constant right-hand side.
  static PackingInstance Uniform(std::size_t n_vars,
                                 std::vector<std::vector<Index>> rows,
                                 double rhs,
                                 RowPolicy policy = RowPolicy::kStrict);

  std::size_t num_rows() const { return rhs_.size(); }
  std::size_t num_vars() const { return weights_.size(); }

  std::span<const Index> row(std::size_t j) const {
    return {row_indices_.data() + row_offsets_[j],
            row_offsets_[j + 1] - row_offsets_[j]};
  }
  std::size_t row_size(std::size_t j) const {
    return row_offsets_[j + 1] - row_offsets_[j];
  }
  std::size_t max_row_size() const { return max_row_size_; }
  std::size_t num_nonzeros() const { return row_indices_.size(); }

  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<double>& weights() const { return weights_; }
  // Divisor applied to the raw weights so that max weight is 1.
  double weight_scale() const { return weight_scale_; }
  // p >= 1 with min weight >= 1/p.
  double weight_floor() const { return weight_floor_; }
  double max_rhs() const;
  // True when every rhs entry equals `value` exactly.
  bool HasUniformRhs(double value) const;

  const ColumnIndex& columns() const;

  // FNV-1a over the canonical text serialization.
  std::uint64_t fingerprint() const { return fingerprint_; }

  friend bool operator==(const PackingInstance& a, const PackingInstance& b) {
    return a.row_offsets_ == b.row_offsets_ &&
           a.row_indices_ == b.row_indices_ && a.rhs_ == b.rhs_ &&
           a.weights_ == b.weights_;
  }

 private:
  struct LazyColumns;

  std::vector<std::size_t> row_offsets_{0};
  std::vector<Index> row_indices_;
  std::vector<double> rhs_;
  std::vector<double> weights_;
  double weight_scale_ = 1.0;
  double weight_floor_ = 1.0;
  std::size_t max_row_size_ = 0;
  std::uint64_t fingerprint_ = 0;
  std::shared_ptr<LazyColumns> columns_;
};

// x in [0,1]^n, optionally certified feasible against an instance.
class FractionalPoint {
 public:
  FractionalPoint() = default;
  explicit FractionalPoint(std::vector<double> values);
  FractionalPoint(std::size_t n, double value)
      : FractionalPoint(std::vector<double>(n, value)) {}

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  bool slack_checked() const { return slack_checked_; }

 private:
  friend FractionalPoint Validate(const PackingInstance&, const FractionalPoint&,
                                  double);
  std::vector<double> values_;
  bool slack_checked_ = false;
};

struct FeasibilityReport {
  double max_row_sum = 0.0;
  // max_j (row_sum_j - rhs_j), clamped below at 0.
  double max_violation = 0.0;
  std::vector<std::size_t> offending_rows;
  bool feasible() const { return offending_rows.empty(); }
};

FeasibilityReport CheckFeasibility(const PackingInstance& instance,
                                   const FractionalPoint& point,
                                   double tolerance = kFeasibilityTolerance);

// Returns the point with slack_checked set. Throws kInfeasible with the
// offending rows listed, or kDimensionMismatch.
FractionalPoint Validate(const PackingInstance& instance,
                         const FractionalPoint& point,
                         double tolerance = kFeasibilityTolerance);

// Divides the point by max(1, max_j row_sum_j / rhs_j).
FractionalPoint ScaleToFeasible(const PackingInstance& instance,
                                const FractionalPoint& point);

double Objective(const PackingInstance& instance, std::span<const double> x);

using Solution = std::vector<std::uint8_t>;

struct RoundingOutcome {
  Solution solution;
  std::int64_t linf_load = 0;
  double objective = 0.0;
  // walk_steps, phases, resamples, fixed_low, fixed_high, ...
  std::map<std::string, std::int64_t> stats;
  bool converged = true;
  std::uint64_t instance_fingerprint = 0;
};

RoundingOutcome Evaluate(const PackingInstance& instance,
                         std::span<const std::uint8_t> solution);

std::vector<std::int64_t> RowLoads(const PackingInstance& instance,
                                   std::span<const std::uint8_t> solution);

// Text formats. Doubles are written with 12 significant digits.
void WriteInstance(std::ostream& out, const PackingInstance& instance);
PackingInstance ReadInstance(std::istream& in);
void SaveInstance(const std::string& path, const PackingInstance& instance);
PackingInstance LoadInstance(const std::string& path);

void WritePoint(std::ostream& out, const FractionalPoint& point);
FractionalPoint ReadPoint(std::istream& in);
void SavePoint(const std::string& path, const FractionalPoint& point);
FractionalPoint LoadPoint(const std::string& path);

void WriteSolution(std::ostream& out, std::span<const std::uint8_t> solution);
Solution ReadSolution(std::istream& in);

std::string FormatReal(double value);

}  // namespace ppack

#endif  // PPACK_CORE_INSTANCE_HPP_
