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

#ifndef PPACK_CORE_ACCEPTANCE_HPP_
#define PPACK_CORE_ACCEPTANCE_HPP_

#include <string>
#include <vector>

namespace ppack {

struct CriterionResult {
  std::string id;     // A1 ... A10, with a /part suffix for split criteria
  std::string suite;  // suite name that runs it
  bool passed = false;
  std::string detail;  // measured vs expected
  double seconds = 0.0;
};

// martingale objective sparsify trend termination degree lowerbound damped
// chernoff greedy, plus "all".
std::vector<std::string> AcceptanceSuites();

// Throws kInvalidArgument listing the suites for an unknown name.
std::vector<CriterionResult> RunAcceptance(const std::string& suite,
                                           std::size_t workers = 0);

std::string FormatCriterion(const CriterionResult& result);

}  // namespace ppack

#endif  // PPACK_CORE_ACCEPTANCE_HPP_
