/* Copyright 2026 The Aragog Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Release gate: ten numbered end-to-end checks with frozen thresholds. Each
// check prints one PASS or FAIL line; any FAIL fails the binary.

#pragma once

#include <string>

namespace acceptance {

inline constexpr int kNumCriteria = 10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Criterion numbers are 1-based and stable; thresholds inside are frozen and
// must not be loosened to make a run pass.
Outcome run_criterion(int number, int jobs);

// Short stable label for the pass/fail line.
std::string criterion_label(int number);

}  // namespace acceptance
