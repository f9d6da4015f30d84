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

#include "probust/cases.hpp"

#include <cmath>
#include <numbers>

#include "probust/errors.hpp"

namespace probust::cases {

NodeIndex require_node(const Grid& grid, double x, double y) {
  const auto n = grid.find_node(x, y, 1e-9 * std::max(1.0, std::abs(grid.domain().x1)));
  if (!n || !grid.is_interior(*n)) throw InvalidArgument("grid does not contain the required interior node");
  return *n;
}

Problem unit_square(std::size_t n, double p) {
  if (n % 2 == 0) throw InvalidArgument("unit_square needs an odd node count");
  ProblemData d;
  d.grid = Grid::square(n, 0.0, 1.0);
  d.f0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.grid.num_interior()));
  d.phi = {d.grid.sample_interior([](double x, double y) { return 2.0 * (x * (1.0 - x) + y * (1.0 - y)); })};
  d.alpha = 1.0 / 16.0;
  d.sigma = Eigen::MatrixXd::Identity(1, 1);
  d.p = p;
  d.objective = ObjectiveSpec::affine_tracking(require_node(d.grid, 0.5, 0.5));
  return Problem(std::move(d));
}

Problem square_sine(std::size_t n, double p) {
  if ((n - 1) % 4 != 0) throw InvalidArgument("square_sine needs n - 1 divisible by 4");
  ProblemData d;
  d.grid = Grid::square(n, 0.0, 2.0 * std::numbers::pi);
  d.f0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.grid.num_interior()));
  d.phi = {d.grid.sample_interior([](double x, double y) {
    const double sx = std::sin(x) * std::sin(x);
    const double sy = std::sin(y) * std::sin(y);
    return 2.0 * sx * (sy - (1.0 - sy)) + 2.0 * sy * (sx - (1.0 - sx));
  })};
  d.alpha = 1.0;
  d.sigma = Eigen::MatrixXd::Identity(1, 1);
  d.p = p;
  return Problem(std::move(d));
}

ControlField square_sine_control(const Grid& grid, double tau) {
  return {grid, grid.sample_interior([tau](double x, double y) { return 2.0 * tau * std::sin(x) * std::sin(y); })};
}

Problem robust_line(std::size_t n) {
  ProblemData d;
  d.grid = Grid::line(n, 0.0, 1.0);
  const auto ni = static_cast<Eigen::Index>(d.grid.num_interior());
  d.f0 = Eigen::VectorXd::Zero(ni);
  d.phi = {Eigen::VectorXd::Constant(ni, 8.0)};
  d.alpha = 0.5;
  d.sigma = Eigen::MatrixXd::Identity(1, 1);
  d.p = 0.5;
  return Problem(std::move(d));
}

UncertaintySet robust_line_set() {
  return UncertaintySet::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), {11});
}

ParametricSource jump_source(double z0, double value, double value_at_z0) {
  return {1, [=](double, double, const Eigen::VectorXd& z) { return z[0] == z0 ? value_at_z0 : value; }};
}

Discontinuous discontinuous(std::size_t n, int z_points) {
  if (n % 2 == 0 || z_points % 2 == 0) throw InvalidArgument("discontinuous case needs odd node and z counts");
  Discontinuous c;
  c.op = assemble_laplacian(Grid::line(n, 0.0, 1.0));
  c.alpha = 1.0;
  c.source = jump_source(0.5, 8.0, 10.0);
  c.support = UncertaintySet::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), {z_points});
  return c;
}

}  // namespace probust::cases
