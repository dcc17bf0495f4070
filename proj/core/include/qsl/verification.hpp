// Copyright 2026 The qsl authors
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsl/config.hpp"

namespace qsl {

/// One verification criterion: a randomized or constructed property battery
/// with its tolerance pinned in code.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full property suite (the same battery behind `qsl verify`).
/// Deterministic given the seed. Criteria are numbered 1..11.
std::vector<CriterionResult> run_verification_suite(std::uint64_t seed = 20260810,
                                                    const Tolerances& tol = {});

} // namespace qsl
