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

// Problem builders and reference computations shared by the unit suites and
// the acceptance binary.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "probust/grid_pde.hpp"
#include "probust/problem.hpp"

namespace probust_test {

/// Three correlated parameters on a 17 x 17 grid of the unit square; alpha
/// leaves room for small controls.
inline probust::Problem three_parameter_problem() {
  using std::numbers::pi;
  probust::ProblemData d;
  d.grid = probust::Grid::square(17, 0.0, 1.0);
  d.f0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.grid.num_interior()));
  d.phi.push_back(Eigen::VectorXd::Ones(d.f0.size()));
  d.phi.push_back(d.grid.sample_interior([](double x, double y) { return 3.0 * std::sin(pi * x) * std::sin(2 * pi * y); }));
  d.phi.push_back(d.grid.sample_interior([](double x, double) { return 4.0 * (x - 0.5); }));
  d.alpha = 0.1;
  d.sigma.resize(3, 3);
  d.sigma << 1.0, 0.3, 0.0, 0.3, 1.0, 0.2, 0.0, 0.2, 0.5;
  return probust::Problem(std::move(d));
}

/// Gaussian noise control, scaled down when needed so that the mean state
/// stays at most alpha / 2.
inline probust::ControlField random_control(const probust::Problem& pr, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(static_cast<Eigen::Index>(pr.grid().num_interior()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = amplitude * nd(rng);
  probust::ControlField u{pr.grid(), v};
  const double top = (pr.control_state(u) + pr.y0()).maxCoeff();
  if (top > 0.5 * pr.alpha()) u.values *= 0.5 * pr.alpha() / top;
  return u;
}

inline Eigen::VectorXd random_unit(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(m);
  for (int i = 0; i < m; ++i) v[i] = nd(rng);
  return v / v.norm();
}

/// Max-norm error of the five-point solve for u = sin(pi x) sin(pi y) on n nodes per axis.
inline double manufactured_error(std::size_t n) {
  using std::numbers::pi;
  const probust::Grid g = probust::Grid::square(n, 0.0, 1.0);
  const probust::PoissonOperator op(g);
  const Eigen::VectorXd f =
      g.sample_interior([](double x, double y) { return 2.0 * pi * pi * std::sin(pi * x) * std::sin(pi * y); });
  const Eigen::VectorXd exact = g.sample_interior([](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
  return (op.solve(f) - exact).cwiseAbs().maxCoeff();
}

struct RobustLineOracle {
  Eigen::VectorXd u;           ///< interior control
  Eigen::VectorXd multiplier;  ///< bound multipliers of the state form
  double max_bound_violation = 0.0;
  bool converged = false;
};

/// Dense reference for the line instance (phi = 8, alpha = 1/2, Xi = [0,1],
/// Tikhonov cost).  With w = A^{-1} 8 >= 0 the worst case is z = 1, so the
/// problem is  min h |A y|^2  s.t.  y <= alpha - w  in the state y = A^{-1} u.
inline RobustLineOracle robust_line_oracle(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n - 1);
  const Eigen::MatrixXd a = dense_laplacian(static_cast<int>(n), 1, h, h);
  const Eigen::VectorXd w = thomas_poisson(Eigen::VectorXd::Constant(a.rows(), 8.0), h);
  const Eigen::VectorXd b = (0.5 - w.array()).matrix();
  const Eigen::MatrixXd H = 2.0 * h * a.transpose() * a;
  const BoundQpResult r = pdas_upper_bounds(H, Eigen::VectorXd::Zero(a.rows()), b);
  return {a * r.x, r.multiplier, (r.x - b).maxCoeff(), r.converged};
}

}  // namespace probust_test
