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

#include "core/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "core/error.hpp"

namespace ppack {

struct PackingInstance::LazyColumns {
  std::once_flag once;
  ColumnIndex index;
};

namespace {

std::uint64_t Fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string Where(std::size_t line_no) {
  return "line " + std::to_string(line_no) + ": ";
}

}  // namespace

std::string FormatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

PackingInstance PackingInstance::Create(std::size_t n_vars,
                                        std::vector<std::vector<Index>> rows,
                                        std::vector<double> rhs,
                                        std::vector<double> weights,
                                        RowPolicy policy) {
  if (rows.size() != rhs.size()) {
    Fail(ErrorCode::kDimensionMismatch,
         "rhs has " + std::to_string(rhs.size()) + " entries for " +
             std::to_string(rows.size()) + " rows");
  }
  if (weights.size() != n_vars) {
    Fail(ErrorCode::kDimensionMismatch,
         "weights has " + std::to_string(weights.size()) + " entries for " +
             std::to_string(n_vars) + " variables");
  }
  PackingInstance inst;
  inst.row_offsets_.reserve(rows.size() + 1);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    auto& r = rows[j];
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end()) {
      Fail(ErrorCode::kInvalidArgument,
           "row " + std::to_string(j) + " repeats a column index");
    }
    if (!r.empty() && r.back() >= n_vars) {
      Fail(ErrorCode::kInvalidArgument,
           "row " + std::to_string(j) + " has column " +
               std::to_string(r.back()) + " outside [0, " +
               std::to_string(n_vars) + ")");
    }
    if (policy == RowPolicy::kStrict && (r.size() < 2 || r.size() + 1 > n_vars)) {
      Fail(ErrorCode::kInvalidArgument,
           "row " + std::to_string(j) + " has " + std::to_string(r.size()) +
               " variables; strict instances need between 2 and n-1");
    }
    if (!(std::isfinite(rhs[j]) && rhs[j] >= 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "rhs[" + std::to_string(j) + "] must be finite and nonnegative");
    }
    inst.row_indices_.insert(inst.row_indices_.end(), r.begin(), r.end());
    inst.row_offsets_.push_back(inst.row_indices_.size());
    inst.max_row_size_ = std::max(inst.max_row_size_, r.size());
  }
  double max_w = 0.0;
  double min_w = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(std::isfinite(weights[i]) && weights[i] > 0.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "weight " + std::to_string(i) + " must be finite and positive");
    }
    max_w = i == 0 ? weights[i] : std::max(max_w, weights[i]);
    min_w = i == 0 ? weights[i] : std::min(min_w, weights[i]);
  }
  if (max_w > 0.0) {
    for (double& w : weights) w /= max_w;
    inst.weight_scale_ = max_w;
    inst.weight_floor_ = max_w / min_w;
  }
  inst.rhs_ = std::move(rhs);
  inst.weights_ = std::move(weights);
  inst.columns_ = std::make_shared<LazyColumns>();

  std::ostringstream canon;
  WriteInstance(canon, inst);
  inst.fingerprint_ = Fnv1a(canon.str());
  return inst;
}

PackingInstance PackingInstance::Uniform(std::size_t n_vars,
                                         std::vector<std::vector<Index>> rows,
                                         double rhs, RowPolicy policy) {
  std::vector<double> b(rows.size(), rhs);
  return Create(n_vars, std::move(rows), std::move(b),
                std::vector<double>(n_vars, 1.0), policy);
}

double PackingInstance::max_rhs() const {
  return rhs_.empty() ? 0.0 : *std::max_element(rhs_.begin(), rhs_.end());
}

bool PackingInstance::HasUniformRhs(double value) const {
  return std::all_of(rhs_.begin(), rhs_.end(),
                     [value](double b) { return b == value; });
}

const ColumnIndex& PackingInstance::columns() const {
  if (!columns_) Fail(ErrorCode::kInternal, "instance was default-constructed");
  std::call_once(columns_->once, [this] {
    ColumnIndex& idx = columns_->index;
    idx.offsets.assign(num_vars() + 1, 0);
    for (Index c : row_indices_) ++idx.offsets[c + 1];
    for (std::size_t i = 0; i < num_vars(); ++i) idx.offsets[i + 1] += idx.offsets[i];
    idx.rows.resize(row_indices_.size());
    std::vector<std::size_t> cursor(idx.offsets.begin(), idx.offsets.end() - 1);
    for (std::size_t j = 0; j < num_rows(); ++j) {
      for (Index c : row(j)) idx.rows[cursor[c]++] = static_cast<Index>(j);
    }
  });
  return columns_->index;
}

FractionalPoint::FractionalPoint(std::vector<double> values)
    : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      Fail(ErrorCode::kInvalidArgument,
           "point coordinate " + std::to_string(i) + " = " +
               FormatReal(values_[i]) + " is outside [0, 1]");
    }
  }
}

FeasibilityReport CheckFeasibility(const PackingInstance& instance,
                                   const FractionalPoint& point,
                                   double tolerance) {
  if (point.size() != instance.num_vars()) {
    Fail(ErrorCode::kDimensionMismatch,
         "point has " + std::to_string(point.size()) + " coordinates, instance has " +
             std::to_string(instance.num_vars()) + " variables");
  }
  FeasibilityReport report;
  for (std::size_t j = 0; j < instance.num_rows(); ++j) {
    double sum = 0.0;
    for (Index i : instance.row(j)) sum += point[i];
    report.max_row_sum = std::max(report.max_row_sum, sum);
    const double excess = sum - instance.rhs()[j];
    report.max_violation = std::max(report.max_violation, excess);
    if (excess > tolerance) report.offending_rows.push_back(j);
  }
  return report;
}

FractionalPoint Validate(const PackingInstance& instance,
                         const FractionalPoint& point, double tolerance) {
  const FeasibilityReport report = CheckFeasibility(instance, point, tolerance);
  if (!report.feasible()) {
    std::ostringstream msg;
    msg << "point violates " << report.offending_rows.size()
        << " row(s) by up to " << FormatReal(report.max_violation) << "; rows:";
    const std::size_t shown = std::min<std::size_t>(report.offending_rows.size(), 20);
    for (std::size_t r = 0; r < shown; ++r) msg << ' ' << report.offending_rows[r];
    if (shown < report.offending_rows.size()) msg << " ...";
    Fail(ErrorCode::kInfeasible, msg.str());
  }
  FractionalPoint checked = point;
  checked.slack_checked_ = true;
  return checked;
}

FractionalPoint ScaleToFeasible(const PackingInstance& instance,
                                const FractionalPoint& point) {
  if (point.size() != instance.num_vars()) {
    Fail(ErrorCode::kDimensionMismatch, "point and instance sizes differ");
  }
  double ratio = 1.0;
  for (std::size_t j = 0; j < instance.num_rows(); ++j) {
    double sum = 0.0;
    for (Index i : instance.row(j)) sum += point[i];
    if (sum <= 0.0) continue;
    const double b = instance.rhs()[j];
    if (b <= 0.0) Fail(ErrorCode::kInfeasible, "row " + std::to_string(j) +
                                                   " has rhs 0 but positive load");
    ratio = std::max(ratio, sum / b);
  }
  std::vector<double> v = point.values();
  if (ratio > 1.0) {
    for (double& x : v) x /= ratio;
  }
  return FractionalPoint(std::move(v));
}

double Objective(const PackingInstance& instance, std::span<const double> x) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) total += instance.weights()[i] * x[i];
  return total;
}

std::vector<std::int64_t> RowLoads(const PackingInstance& instance,
                                   std::span<const std::uint8_t> solution) {
  std::vector<std::int64_t> loads(instance.num_rows(), 0);
  for (std::size_t j = 0; j < instance.num_rows(); ++j) {
    for (Index i : instance.row(j)) loads[j] += solution[i];
  }
  return loads;
}

RoundingOutcome Evaluate(const PackingInstance& instance,
                         std::span<const std::uint8_t> solution) {
  if (solution.size() != instance.num_vars()) {
    Fail(ErrorCode::kDimensionMismatch,
         "solution has " + std::to_string(solution.size()) +
             " entries, instance has " + std::to_string(instance.num_vars()) +
             " variables");
  }
  RoundingOutcome out;
  out.solution.assign(solution.begin(), solution.end());
  for (std::size_t i = 0; i < solution.size(); ++i) {
    if (solution[i] > 1) {
      Fail(ErrorCode::kInvalidArgument,
           "solution entry " + std::to_string(i) + " is not 0 or 1");
    }
    if (solution[i]) out.objective += instance.weights()[i];
  }
  for (std::int64_t load : RowLoads(instance, solution)) {
    out.linf_load = std::max(out.linf_load, load);
  }
  out.instance_fingerprint = instance.fingerprint();
  return out;
}

// ---------------------------------------------------------------------------
// Text I/O

void WriteInstance(std::ostream& out, const PackingInstance& instance) {
  out << "ppack " << instance.num_rows() << ' ' << instance.num_vars() << '\n';
  out << "rhs";
  for (double b : instance.rhs()) out << ' ' << FormatReal(b);
  out << "\nw";
  for (double c : instance.weights()) out << ' ' << FormatReal(c);
  out << '\n';
  for (std::size_t j = 0; j < instance.num_rows(); ++j) {
    out << "row " << j;
    for (Index i : instance.row(j)) out << ' ' << i;
    out << '\n';
  }
}

namespace {

// Next non-blank, non-comment line split into tokens.
bool NextRecord(std::istream& in, std::size_t& line_no,
                std::vector<std::string>& tokens) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    tokens.clear();
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    return true;
  }
  return false;
}

double ParseReal(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) {
    Fail(ErrorCode::kParse, Where(line_no) + "expected a number, got '" + tok + "'");
  }
  return v;
}

std::uint64_t ParseCount(const std::string& tok, std::size_t line_no) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!tok.empty() && tok[0] != '-') v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    Fail(ErrorCode::kParse,
         Where(line_no) + "expected a nonnegative integer, got '" + tok + "'");
  }
  return v;
}

void ExpectHeader(const std::vector<std::string>& tokens, const char* tag,
                  std::size_t expected_size, std::size_t line_no) {
  if (tokens.empty() || tokens[0] != tag) {
    Fail(ErrorCode::kParse, Where(line_no) + "expected '" + tag + "' record");
  }
  if (expected_size != static_cast<std::size_t>(-1) &&
      tokens.size() != expected_size) {
    Fail(ErrorCode::kParse, Where(line_no) + "'" + tag + "' record has " +
                                std::to_string(tokens.size() - 1) +
                                " fields, expected " +
                                std::to_string(expected_size - 1));
  }
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

PackingInstance ReadInstance(std::istream& in) {
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  if (!NextRecord(in, line_no, tok)) Fail(ErrorCode::kParse, "empty instance file");
  ExpectHeader(tok, "ppack", 3, line_no);
  const std::size_t m = ParseCount(tok[1], line_no);
  const std::size_t n = ParseCount(tok[2], line_no);

  if (!NextRecord(in, line_no, tok)) Fail(ErrorCode::kParse, "missing 'rhs' record");
  ExpectHeader(tok, "rhs", m + 1, line_no);
  std::vector<double> rhs;
  rhs.reserve(m);
  for (std::size_t j = 0; j < m; ++j) rhs.push_back(ParseReal(tok[j + 1], line_no));

  if (!NextRecord(in, line_no, tok)) Fail(ErrorCode::kParse, "missing 'w' record");
  ExpectHeader(tok, "w", n + 1, line_no);
  std::vector<double> w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.push_back(ParseReal(tok[i + 1], line_no));

  std::vector<std::vector<Index>> rows(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!NextRecord(in, line_no, tok)) {
      Fail(ErrorCode::kParse, "expected " + std::to_string(m) + " rows, found " +
                                  std::to_string(j));
    }
    ExpectHeader(tok, "row", static_cast<std::size_t>(-1), line_no);
    if (tok.size() < 2 || ParseCount(tok[1], line_no) != j) {
      Fail(ErrorCode::kParse, Where(line_no) + "expected 'row " + std::to_string(j) + "'");
    }
    rows[j].reserve(tok.size() - 2);
    for (std::size_t t = 2; t < tok.size(); ++t) {
      const std::uint64_t idx = ParseCount(tok[t], line_no);
      if (idx >= n) {
        Fail(ErrorCode::kParse, Where(line_no) + "column " + tok[t] + " out of range");
      }
      rows[j].push_back(static_cast<Index>(idx));
    }
  }
  if (NextRecord(in, line_no, tok)) {
    Fail(ErrorCode::kParse, Where(line_no) + "trailing data after last row");
  }
  return PackingInstance::Create(n, std::move(rows), std::move(rhs), std::move(w),
                                 RowPolicy::kLenient);
}

void SaveInstance(const std::string& path, const PackingInstance& instance) {
  auto out = OpenOut(path);
  WriteInstance(out, instance);
  if (!out) Fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

PackingInstance LoadInstance(const std::string& path) {
  auto in = OpenIn(path);
  return ReadInstance(in);
}

void WritePoint(std::ostream& out, const FractionalPoint& point) {
  out << "frac " << point.size() << '\n';
  for (std::size_t i = 0; i < point.size(); ++i) {
    out << (i ? " " : "") << FormatReal(point[i]);
  }
  out << '\n';
}

FractionalPoint ReadPoint(std::istream& in) {
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  if (!NextRecord(in, line_no, tok)) Fail(ErrorCode::kParse, "empty point file");
  ExpectHeader(tok, "frac", 2, line_no);
  const std::size_t n = ParseCount(tok[1], line_no);
  std::vector<double> v;
  v.reserve(n);
  while (v.size() < n && NextRecord(in, line_no, tok)) {
    for (const auto& t : tok) v.push_back(ParseReal(t, line_no));
  }
  if (v.size() != n) {
    Fail(ErrorCode::kParse, "point declares " + std::to_string(n) +
                                " values, found " + std::to_string(v.size()));
  }
  return FractionalPoint(std::move(v));
}

void SavePoint(const std::string& path, const FractionalPoint& point) {
  auto out = OpenOut(path);
  WritePoint(out, point);
  if (!out) Fail(ErrorCode::kIo, "write to '" + path + "' failed");
}

FractionalPoint LoadPoint(const std::string& path) {
  auto in = OpenIn(path);
  return ReadPoint(in);
}

void WriteSolution(std::ostream& out, std::span<const std::uint8_t> solution) {
  out << "sol " << solution.size() << '\n';
  for (std::size_t i = 0; i < solution.size(); ++i) {
    out << (i ? " " : "") << static_cast<int>(solution[i]);
  }
  out << '\n';
}

Solution ReadSolution(std::istream& in) {
  std::size_t line_no = 0;
  std::vector<std::string> tok;
  if (!NextRecord(in, line_no, tok)) Fail(ErrorCode::kParse, "empty solution file");
  ExpectHeader(tok, "sol", 2, line_no);
  const std::size_t n = ParseCount(tok[1], line_no);
  Solution s;
  s.reserve(n);
  while (s.size() < n && NextRecord(in, line_no, tok)) {
    for (const auto& t : tok) {
      if (t != "0" && t != "1") {
        Fail(ErrorCode::kParse, Where(line_no) + "solution entries must be 0 or 1");
      }
      s.push_back(t == "1" ? 1 : 0);
    }
  }
  if (s.size() != n) {
    Fail(ErrorCode::kParse, "solution declares " + std::to_string(n) +
                                " entries, found " + std::to_string(s.size()));
  }
  return s;
}

}  // namespace ppack
