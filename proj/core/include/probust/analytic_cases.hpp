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

// Closed-form reference values of the four worked cases.  These are written
// out by hand from the exact solutions and never call the numerical modules.

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace probust {

enum class CaseId {
  square_sine,     ///< sine-product data on (0, 2pi)^2, curve tau -> phi(2 tau u^)
  unit_square,     ///< polynomial data on (0,1)^2 with u* = 0 active
  scalar_density,  ///< scalar model phi(u) = 2u - u^2
  discontinuous,   ///< 1D source with a jump at z = 1/2
};

std::string_view case_name(CaseId id) noexcept;
std::optional<CaseId> parse_case(std::string_view name) noexcept;

/// Parameters of a case run.  `grid_n` is the node count per axis.
struct CaseSpec {
  CaseId id = CaseId::unit_square;
  std::size_t grid_n = 65;
  double p = 0.75;
  double tau_min = -0.9;
  double tau_max = 0.9;

  /// Throws InvalidArgument outside the documented ranges.
  void validate() const;
};

/// Standard normal distribution function and density, from erfc / exp.
double oracle_normal_cdf(double x);
double oracle_normal_density(double x);
/// Chi density with one degree of freedom at t = 1: sqrt(2/pi) exp(-1/2).
double oracle_chi1_at_one();

struct SquareSineOracle {
  double phi_tilde = 0.0;
  /// Derivatives at tau = 0 from the left and from the right.
  std::pair<double, double> slopes_at_zero;
};

/// Phi(1 - |tau|) and slopes (+F(1), -F(1)); throws for |tau| >= 1.
SquareSineOracle oracle_square_sine(double tau);

struct UnitSquareOracle {
  double rho_plus = 1.0;
  double rho_minus = std::numeric_limits<double>::infinity();
  double active_x = 0.5;
  double active_y = 0.5;
  /// grad phi(0) = grad_factor * u~, u~ the representer at the active point.
  double grad_factor = 0.0;
  double p = 0.0;
  /// Multiplier in the convention grad F = lambda g; positive.
  double lambda = 0.0;
};

UnitSquareOracle oracle_unit_square();

struct ScalarOracle {
  double u_star = 0.0;
  double lambda = 0.0;
};

/// u* = 1 - sqrt(1-p), lambda = 1 / (2 sqrt(1-p)); throws outside (0,1).
ScalarOracle oracle_scalar(double p);
/// 0 below 0, 2u - u^2 on [0,1], 1 above.
double oracle_scalar_phi(double u);

struct DiscontinuousOracle {
  bool as_feasible_at_zero = true;
  bool robust_feasible_at_zero = false;
  double witness_x = 0.5;
  double witness_z = 0.5;
  double witness_value = 1.25;
};

DiscontinuousOracle oracle_discontinuous();

}  // namespace probust
