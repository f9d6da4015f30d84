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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "probust/errors.hpp"
#include "probust/grid_pde.hpp"

using namespace probust;

namespace {

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST_CASE("grid geometry and indexing") {
  const Grid g(5, 4, Rectangle{0.0, 2.0, 1.0, 4.0});
  CHECK(g.dimension() == 2);
  CHECK(g.hx() == doctest::Approx(0.5));
  CHECK(g.hy() == doctest::Approx(1.0));
  CHECK(g.cell_area() == doctest::Approx(0.5));
  CHECK(g.num_nodes() == 20);
  CHECK(g.num_interior() == 6);
  for (std::size_t k = 0; k < g.num_interior(); ++k) {
    const NodeIndex n = g.interior_node(k);
    CHECK(g.is_interior(n));
    CHECK(g.interior_index(n) == k);
  }
  CHECK_FALSE(g.is_interior(g.node(0, 2)));
  CHECK_THROWS_AS(static_cast<void>(g.interior_index(g.node(4, 1))), InvalidArgument);
  const auto c = g.coords(g.node(3, 2));
  CHECK(c[0] == doctest::Approx(1.5));
  CHECK(c[1] == doctest::Approx(3.0));
  REQUIRE(g.find_node(1.5, 3.0).has_value());
  CHECK(*g.find_node(1.5, 3.0) == g.node(3, 2));
  CHECK_FALSE(g.find_node(1.2, 3.0).has_value());
}

TEST_CASE("line grids") {
  const Grid g = Grid::line(11, 0.0, 1.0);
  CHECK(g.dimension() == 1);
  CHECK(g.num_interior() == 9);
  CHECK(g.cell_area() == doctest::Approx(0.1));
  CHECK(g.coords(g.node(5))[0] == doctest::Approx(0.5));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(Grid(2, 5, Rectangle{}), InvalidArgument);
  CHECK_THROWS_AS(Grid(5, 2, Rectangle{}), InvalidArgument);
  CHECK_THROWS_AS(Grid::line(5, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Grid::square(5, 0.0, 0.0), InvalidArgument);
}

TEST_CASE("embed and restrict are inverse on the interior") {
  const Grid g = Grid::square(6, 0.0, 1.0);
  std::mt19937_64 rng(3);
  const Eigen::VectorXd v = random_vector(static_cast<Eigen::Index>(g.num_interior()), rng);
  const Eigen::VectorXd full = g.embed(v);
  CHECK(full.size() == static_cast<Eigen::Index>(g.num_nodes()));
  CHECK(full[static_cast<Eigen::Index>(g.node(0, 3))] == 0.0);
  CHECK((g.restrict(full) - v).norm() == 0.0);
}

TEST_CASE("stencil matches an independently assembled dense Laplacian") {
  for (auto [nx, ny] : {std::pair<int, int>{7, 5}, {9, 1}}) {
    const Grid g = ny == 1 ? Grid::line(nx, 0.0, 2.0) : Grid(nx, ny, Rectangle{0.0, 2.0, 0.0, 1.0});
    const PoissonOperator op(g);
    const Eigen::MatrixXd dense = probust_test::dense_laplacian(nx, ny, g.hx(), g.hy());
    std::mt19937_64 rng(5);
    const Eigen::VectorXd v = random_vector(dense.rows(), rng);
    CHECK((op.apply(v) - dense * v).norm() <= 1e-10 * (dense * v).norm());
    CHECK((Eigen::MatrixXd(op.matrix()) - dense).norm() <= 1e-12 * dense.norm());
  }
}

TEST_CASE("line solve agrees with the tridiagonal recursion") {
  const Grid g = Grid::line(101, 0.0, 1.0);
  const PoissonOperator op(g);
  const Eigen::VectorXd f = g.sample_interior([](double x, double) { return std::exp(x) * std::cos(3 * x); });
  const Eigen::VectorXd oracle = probust_test::thomas_poisson(f, g.hx());
  CHECK((op.solve(f) - oracle).cwiseAbs().maxCoeff() <= 1e-12 * oracle.cwiseAbs().maxCoeff());
}

TEST_CASE("quadratic solutions are reproduced exactly") {
  const Grid g = Grid::square(17, 0.0, 1.0);
  const PoissonOperator op(g);
  // -Laplace of x(1-x)y(1-y); the five-point stencil is exact on quadratics in each variable.
  const Eigen::VectorXd f =
      g.sample_interior([](double x, double y) { return 2.0 * (y * (1 - y) + x * (1 - x)); });
  const Eigen::VectorXd exact = g.sample_interior([](double x, double y) { return x * (1 - x) * y * (1 - y); });
  CHECK((op.solve(f) - exact).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("second-order convergence on a manufactured solution") {
  double prev = probust_test::manufactured_error(9);
  for (std::size_t n : {17u, 33u, 65u}) {
    const double err = probust_test::manufactured_error(n);
    const double ratio = prev / err;
    INFO("n = " << n << " ratio = " << ratio);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
    prev = err;
  }
}

TEST_CASE("solution operator is linear and self-adjoint in the grid inner product") {
  const Grid g = Grid::square(13, 0.0, 1.0);
  const PoissonOperator op(g);
  std::mt19937_64 rng(11);
  const auto n = static_cast<Eigen::Index>(g.num_interior());
  const Eigen::VectorXd a = random_vector(n, rng);
  const Eigen::VectorXd b = random_vector(n, rng);
  const Eigen::VectorXd lin = op.solve(2.0 * a - 3.0 * b) - (2.0 * op.solve(a) - 3.0 * op.solve(b));
  CHECK(lin.norm() <= 1e-10 * op.solve(a).norm());
  CHECK(g.inner(op.solve(a), b) == doctest::Approx(g.inner(a, op.solve(b))).epsilon(1e-12));
}

TEST_CASE("discrete maximum principle") {
  const Grid g = Grid::square(15, 0.0, 1.0);
  const PoissonOperator op(g);
  std::mt19937_64 rng(2);
  const Eigen::VectorXd f = random_vector(static_cast<Eigen::Index>(g.num_interior()), rng).cwiseAbs();
  CHECK(op.solve(f).minCoeff() >= 0.0);
}

TEST_CASE("representer reproduces point evaluation of the solution operator") {
  const Grid g = Grid::square(11, 0.0, 1.0);
  const PoissonOperator op(g);
  std::mt19937_64 rng(9);
  const Eigen::VectorXd h = random_vector(static_cast<Eigen::Index>(g.num_interior()), rng);
  const Eigen::VectorXd y = op.solve(h);
  for (std::size_t k : {0u, 17u, 40u, 80u}) {
    const NodeIndex n = g.interior_node(k);
    const ControlField r = representer(op, n);
    CHECK(g.inner(r.values, h) == doctest::Approx(y[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(static_cast<void>(representer(op, g.node(0, 0))), InvalidArgument);
}

TEST_CASE("Cholesky and conjugate gradients agree") {
  const Grid g = Grid::square(33, 0.0, 1.0);
  const PoissonOperator chol(g, LinearSolverKind::cholesky);
  const PoissonOperator pcg(g, LinearSolverKind::pcg);
  std::mt19937_64 rng(4);
  const Eigen::VectorXd f = random_vector(static_cast<Eigen::Index>(g.num_interior()), rng);
  const Eigen::VectorXd a = chol.solve(f);
  CHECK((a - pcg.solve(f)).norm() <= 1e-8 * a.norm());
}

TEST_CASE("solve rejects wrong sizes") {
  const Grid g = Grid::square(5, 0.0, 1.0);
  const PoissonOperator op(g);
  CHECK_THROWS_AS(static_cast<void>(op.solve(Eigen::VectorXd::Zero(3))), InvalidArgument);
}

TEST_CASE("max_state reports every node within the tolerance") {
  const Grid g = Grid::line(7, 0.0, 1.0);
  StateField y{g, Eigen::VectorXd::Zero(7)};
  y.values << 0.0, 1.0, 2.0, 2.0 - 1e-12, 1.5, 2.0, 0.0;
  const MaxState m = max_state(y);
  CHECK(m.value == 2.0);
  CHECK(m.argmax == std::vector<NodeIndex>{2, 3, 5});
  CHECK(max_state(y, 0.0).argmax == std::vector<NodeIndex>{2, 5});
}

TEST_CASE("control fields") {
  const Grid g = Grid::square(5, 0.0, 1.0);
  const ControlField z = ControlField::zero(g);
  CHECK(z.values.size() == 9);
  CHECK(z.norm() == 0.0);
  const ControlField one = ControlField::from(g, Eigen::VectorXd::Ones(9));
  CHECK(one.norm() == doctest::Approx(std::sqrt(9.0 / 16.0)));
  CHECK_THROWS_AS(static_cast<void>(ControlField::from(g, Eigen::VectorXd::Ones(4))), InvalidArgument);
}
