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

// Runs the acceptance criteria and prints one line per criterion.
//   ppack_acceptance [suite] [workers] [criterion]
// With a criterion id only that line is printed and decides the exit code.

#include <cstdlib>
#include <iostream>
#include <string>

#include "core/acceptance.hpp"
#include "core/error.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "all";
  const std::size_t workers = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 0;
  const std::string only = argc > 3 ? argv[3] : "";
  try {
    bool all = true;
    bool seen = false;
    for (const ppack::CriterionResult& r : ppack::RunAcceptance(suite, workers)) {
      if (!only.empty() && r.id != only) continue;
      seen = true;
      std::cout << ppack::FormatCriterion(r) << std::endl;
      all &= r.passed;
    }
    if (!seen) {
      std::cerr << "ppack_acceptance: no criterion '" << only << "' in suite " << suite << '\n';
      return 2;
    }
    return all ? 0 : 1;
  } catch (const ppack::Error& e) {
    std::cerr << "ppack_acceptance: " << e.what() << '\n';
    return 2;
  }
}
