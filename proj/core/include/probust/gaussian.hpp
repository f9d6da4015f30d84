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

// Gaussian machinery behind the spherical-radial decomposition: a covariance
// root, the chi distribution of the radial part, and direction sets
// discretizing the uniform law on the unit sphere.

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace probust {

/// Lower Cholesky factor L with L L^T = Sigma.
struct CovarianceFactor {
  Eigen::MatrixXd lower;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(lower.rows()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return lower * v; }
};

/// Cholesky root of a symmetric positive-definite matrix.  Throws
/// CovarianceError naming the failing pivot.
CovarianceFactor cholesky_sqrt(const Eigen::MatrixXd& sigma);

/// Chi distribution with m degrees of freedom: the law of |N(0, I_m)|.
class ChiDistribution {
 public:
  explicit ChiDistribution(int dof);

  int dof() const noexcept { return dof_; }
  /// K in chi(t) = K t^{m-1} exp(-t^2/2).
  double normalization() const noexcept { return norm_; }

  /// P(m/2, t^2/2); t may be +infinity.  Throws for negative t.
  double cdf(double t) const;
  double pdf(double t) const;

 private:
  int dof_;
  double norm_;
  double log_norm_;
};

inline double chi_cdf(const ChiDistribution& d, double t) { return d.cdf(t); }
inline double chi_pdf(const ChiDistribution& d, double t) { return d.pdf(t); }

/// Standard normal distribution function and density.
double normal_cdf(double x);
double normal_pdf(double x);

enum class DirectionProvenance {
  exact_two_point,             ///< S^0 = {-1, +1} with weights 1/2
  seeded_gaussian_normalized,  ///< i.i.d. normalized Gaussian draws
  antithetic,                  ///< normalized Gaussian draws in (v, -v) pairs
};

/// Weighted directions approximating the uniform measure on S^{m-1}.
struct DirectionSet {
  std::size_t dim = 0;
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> weights;
  DirectionProvenance provenance = DirectionProvenance::antithetic;

  std::size_t size() const noexcept { return directions.size(); }
};

/// Direction set for dimension m.  m == 1 always yields the exact two-point
/// measure.  For m >= 2 the set holds antithetic pairs, so odd n is rounded up
/// to the next even count; `antithetic = false` draws n independent directions
/// instead.  Every pair (or draw) k comes from its own generator stream keyed by
/// (seed, k), so batches can be produced in any order.
DirectionSet sample_sphere(int m, std::size_t n, std::uint64_t seed, bool antithetic = true);

/// Reproducible generator for stream `index` of `seed`.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

/// n draws of z = L xi with xi ~ N(0, I).
std::vector<Eigen::VectorXd> sample_gaussian(const CovarianceFactor& factor, std::size_t n,
                                             std::uint64_t seed);

/// n draws uniform on the box [lower, upper].
std::vector<Eigen::VectorXd> sample_uniform_box(const Eigen::VectorXd& lower,
                                                const Eigen::VectorXd& upper, std::size_t n,
                                                std::uint64_t seed);

}  // namespace probust
