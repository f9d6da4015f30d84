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
#include <limits>

#include "oracles.hpp"
#include "probust/errors.hpp"
#include "probust/gaussian.hpp"

using namespace probust;

TEST_CASE("Cholesky root reproduces the covariance") {
  Eigen::MatrixXd s(2, 2);
  s << 4, 2, 2, 3;
  const CovarianceFactor f = cholesky_sqrt(s);
  CHECK(f.dim() == 2);
  CHECK((f.lower * f.lower.transpose() - s).norm() <= 1e-14);
  CHECK(f.lower(0, 1) == 0.0);
  CHECK(f.lower(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("indefinite covariance names the failing pivot") {
  Eigen::MatrixXd s(3, 3);
  s << 1, 0, 0, 0, 1, 2, 0, 2, 1;
  try {
    static_cast<void>(cholesky_sqrt(s));
    FAIL("expected CovarianceError");
  } catch (const CovarianceError& e) {
    CHECK(e.pivot() == 2);
  }
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(static_cast<void>(cholesky_sqrt(asym)), CovarianceError);
  CHECK_THROWS_AS(static_cast<void>(cholesky_sqrt(Eigen::MatrixXd(0, 0))), CovarianceError);
}

TEST_CASE("chi distribution function against quadrature of the density") {
  for (int m : {1, 2, 3, 5, 8}) {
    const ChiDistribution chi(m);
    for (double t : {0.1, 0.5, 1.0, 1.7, 3.0, 5.0}) {
      INFO("m = " << m << " t = " << t);
      CHECK(chi.cdf(t) == doctest::Approx(probust_test::chi_cdf_quad(m, t)).epsilon(1e-10));
      CHECK(chi.pdf(t) == doctest::Approx(probust_test::chi_density(m, t)).epsilon(1e-12));
    }
    CHECK(chi.cdf(0.0) == 0.0);
    CHECK(chi.cdf(std::numeric_limits<double>::infinity()) == 1.0);
  }
}

TEST_CASE("chi with one degree of freedom is the folded normal") {
  const ChiDistribution chi(1);
  for (double t : {0.3, 1.0, 2.5})
    CHECK(chi.cdf(t) == doctest::Approx(2.0 * probust_test::normal_cdf_quad(t) - 1.0).epsilon(1e-12));
  CHECK(chi.pdf(1.0) == doctest::Approx(0.48394144903828673).epsilon(1e-14));
}

TEST_CASE("chi argument checks") {
  const ChiDistribution chi(2);
  CHECK_THROWS_AS(static_cast<void>(chi.cdf(-0.1)), InvalidArgument);
  CHECK_THROWS_AS(static_cast<void>(chi.cdf(std::nan(""))), InvalidArgument);
  CHECK_THROWS_AS(ChiDistribution(0), InvalidArgument);
}

TEST_CASE("normal distribution function") {
  for (double x : {-2.0, -0.5, 0.0, 1.0, 3.0})
    CHECK(normal_cdf(x) == doctest::Approx(probust_test::normal_cdf_quad(x)).epsilon(1e-12));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-15));
}

TEST_CASE("one-dimensional sphere is the exact two-point set") {
  const DirectionSet d = sample_sphere(1, 100, 5);
  CHECK(d.provenance == DirectionProvenance::exact_two_point);
  REQUIRE(d.size() == 2);
  CHECK(d.directions[0][0] == 1.0);
  CHECK(d.directions[1][0] == -1.0);
  CHECK(d.weights[0] == 0.5);
}

TEST_CASE("antithetic direction sets") {
  const DirectionSet d = sample_sphere(3, 7, 42);
  CHECK(d.provenance == DirectionProvenance::antithetic);
  REQUIRE(d.size() == 8);
  double wsum = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    CHECK(d.directions[k].norm() == doctest::Approx(1.0).epsilon(1e-14));
    wsum += d.weights[k];
  }
  CHECK(wsum == doctest::Approx(1.0));
  for (std::size_t k = 0; k < d.size(); k += 2) CHECK((d.directions[k] + d.directions[k + 1]).norm() == 0.0);
}

TEST_CASE("direction sets are reproducible and batch-stable") {
  const DirectionSet a = sample_sphere(4, 20, 9);
  const DirectionSet b = sample_sphere(4, 20, 9);
  const DirectionSet longer = sample_sphere(4, 40, 9);
  const DirectionSet other = sample_sphere(4, 20, 10);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK((a.directions[k] - b.directions[k]).norm() == 0.0);
    CHECK((a.directions[k] - longer.directions[k]).norm() == 0.0);
  }
  CHECK((a.directions[0] - other.directions[0]).norm() > 0.0);
}

TEST_CASE("independent draws") {
  const DirectionSet d = sample_sphere(2, 5, 1, false);
  CHECK(d.provenance == DirectionProvenance::seeded_gaussian_normalized);
  CHECK(d.size() == 5);
  CHECK_THROWS_AS(static_cast<void>(sample_sphere(0, 5, 1)), InvalidArgument);
  CHECK_THROWS_AS(static_cast<void>(sample_sphere(2, 0, 1)), InvalidArgument);
}

TEST_CASE("directions spread uniformly over the circle") {
  // Each quadrant of S^1 should receive about a quarter of the draws.
  const DirectionSet d = sample_sphere(2, 4000, 77, false);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& v : d.directions) counts[(v[0] >= 0 ? 0 : 1) + (v[1] >= 0 ? 0 : 2)]++;
  const double se = std::sqrt(4000 * 0.25 * 0.75);
  for (int c : counts) CHECK(std::abs(c - 1000.0) <= 4.0 * se);
}

TEST_CASE("Gaussian samples match the covariance") {
  Eigen::MatrixXd s(2, 2);
  s << 4, 2, 2, 3;
  const auto draws = sample_gaussian(cholesky_sqrt(s), 40000, 3);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& z : draws) mean += z;
  mean /= static_cast<double>(draws.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& z : draws) cov += (z - mean) * (z - mean).transpose();
  cov /= static_cast<double>(draws.size() - 1);
  CHECK(mean.norm() <= 0.05);
  CHECK((cov - s).cwiseAbs().maxCoeff() <= 0.15);
}

TEST_CASE("uniform box samples stay in the box") {
  const Eigen::Vector2d lo(0.0, -1.0), hi(1.0, 2.0);
  const auto draws = sample_uniform_box(lo, hi, 1000, 4);
  for (const auto& z : draws) {
    CHECK(z[0] >= 0.0);
    CHECK(z[0] <= 1.0);
    CHECK(z[1] >= -1.0);
    CHECK(z[1] <= 2.0);
  }
  CHECK_THROWS_AS(static_cast<void>(sample_uniform_box(hi, lo, 3, 1)), InvalidArgument);
}
