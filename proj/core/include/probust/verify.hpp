/*
 Copyright 2026 The probust Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

// Replays the worked cases against their closed-form oracles.

#include <string>
#include <vector>

#include "probust/analytic_cases.hpp"

namespace probust {

struct VerifyRow {
  std::string case_id;
  std::string check;
  double measured = 0.0;
  double expected = 0.0;
  /// Bound on |measured - expected| (or on measured when expected is 0 and
  /// the check is a residual).
  double tolerance = 0.0;
  bool pass = false;
};

/// Defaults: 65 nodes per axis, p = 0.75 for the scalar model.
CaseSpec default_case_spec(CaseId id);

std::vector<VerifyRow> verify_case(const CaseSpec& spec);
std::vector<VerifyRow> verify_all();

}  // namespace probust
