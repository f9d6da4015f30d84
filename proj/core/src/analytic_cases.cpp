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

#include "probust/analytic_cases.hpp"

#include <cmath>
#include <numbers>

#include "probust/errors.hpp"

namespace probust {

std::string_view case_name(CaseId id) noexcept {
  switch (id) {
    case CaseId::square_sine:
      return "square_sine";
    case CaseId::unit_square:
      return "unit_square";
    case CaseId::scalar_density:
      return "scalar_density";
    case CaseId::discontinuous:
      return "discontinuous";
  }
  return "unknown";
}

std::optional<CaseId> parse_case(std::string_view name) noexcept {
  for (CaseId id : {CaseId::square_sine, CaseId::unit_square, CaseId::scalar_density, CaseId::discontinuous})
    if (case_name(id) == name) return id;
  return std::nullopt;
}

void CaseSpec::validate() const {
  if (grid_n < 3) throw InvalidArgument("case grid needs at least 3 nodes per axis");
  if ((id == CaseId::unit_square || id == CaseId::discontinuous) && grid_n % 2 == 0)
    throw InvalidArgument("case grid needs an odd node count so that the midpoint is a node");
  if (id == CaseId::square_sine && (grid_n - 1) % 4 != 0)
    throw InvalidArgument("square_sine grid needs n - 1 divisible by 4 to contain the maximizers");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("case probability level must lie in (0,1)");
  if (!(tau_min > -1.0 && tau_max < 1.0 && tau_min <= tau_max))
    throw InvalidArgument("tau range must lie inside (-1,1)");
}

double oracle_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double oracle_normal_density(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double oracle_chi1_at_one() { return std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5); }

SquareSineOracle oracle_square_sine(double tau) {
  if (!(std::abs(tau) < 1.0)) throw InvalidArgument("tau must satisfy |tau| < 1");
  const double f1 = oracle_normal_density(1.0);
  return {oracle_normal_cdf(1.0 - std::abs(tau)), {f1, -f1}};
}

UnitSquareOracle oracle_unit_square() {
  UnitSquareOracle o;
  const double chi1 = oracle_chi1_at_one();
  o.grad_factor = -8.0 * chi1;
  o.p = oracle_normal_cdf(1.0);
  o.lambda = 1.0 / (4.0 * chi1);
  return o;
}

ScalarOracle oracle_scalar(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
  const double r = std::sqrt(1.0 - p);
  return {1.0 - r, 1.0 / (2.0 * r)};
}

double oracle_scalar_phi(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return 2.0 * u - u * u;
}

DiscontinuousOracle oracle_discontinuous() { return {}; }

}  // namespace probust
