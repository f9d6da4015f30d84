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

#include "probust/errors.hpp"

#include <sstream>

namespace probust {

CovarianceError::CovarianceError(const std::string& what, std::ptrdiff_t pivot)
    : Error(what), pivot_(pivot) {}

LinearSolverError::LinearSolverError(const std::string& what, double residual)
    : Error(what), residual_(residual) {}

namespace {
std::string slater_message(double max_state, double alpha) {
  std::ostringstream os;
  os.precision(12);
  os << "Slater condition violated: the expected state must stay strictly below alpha "
        "on the closed domain, but max S(u,0) = "
     << max_state << " >= alpha = " << alpha;
  return os.str();
}
}  // namespace

SlaterViolation::SlaterViolation(double max_expected_state, double alpha)
    : Error(slater_message(max_expected_state, alpha)),
      max_state_(max_expected_state),
      alpha_(alpha) {}

}  // namespace probust
