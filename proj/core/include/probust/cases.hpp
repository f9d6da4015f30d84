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

// Problem builders for the worked cases and the 1D robust test instance.

#include <Eigen/Core>

#include <memory>

#include "probust/grid_pde.hpp"
#include "probust/problem.hpp"
#include "probust/robust_as.hpp"

namespace probust::cases {

/// (0,1)^2, m = 1, alpha = 1/16, f0 = 0, phi_1 = 2(x(1-x) + y(1-y)),
/// F(u) = ||u - u~||^2 with u~ the representer at (1/2,1/2).  `n` must be odd.
Problem unit_square(std::size_t n, double p);

/// (0,2pi)^2, m = 1, alpha = 1, f0 = 0, sine source; Tikhonov cost.
/// (n - 1) must be divisible by 4.
Problem square_sine(std::size_t n, double p = 0.5);

/// Control 2 tau sin(x) sin(y) on the square_sine grid.
ControlField square_sine_control(const Grid& grid, double tau);

/// Interior node at (x,y); throws when the grid does not contain it.
NodeIndex require_node(const Grid& grid, double x, double y = 0.0);

/// Line (0,1), phi_1 = 8, alpha = 1/2, f0 = 0, F(u) = ||u||^2.
Problem robust_line(std::size_t n);
/// Xi = [0,1].
UncertaintySet robust_line_set();

/// 1D data with the jump source 2 f(z), f = 4 off z = 1/2 and 5 at z = 1/2;
/// alpha = 1, Xi = [0,1] discretized with `z_points` (odd) points.
struct Discontinuous {
  std::shared_ptr<const PoissonOperator> op;
  double alpha = 1.0;
  ParametricSource source;
  UncertaintySet support;
};

Discontinuous discontinuous(std::size_t n, int z_points = 11);

/// f(z) = value off z0, value_at_z0 at z0 (exact comparison).
ParametricSource jump_source(double z0, double value, double value_at_z0);

}  // namespace probust::cases
