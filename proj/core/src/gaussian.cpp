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

#include "probust/gaussian.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "probust/errors.hpp"

namespace probust {

CovarianceFactor cholesky_sqrt(const Eigen::MatrixXd& sigma) {
  const Eigen::Index m = sigma.rows();
  if (m == 0 || sigma.cols() != m) throw CovarianceError("covariance must be a non-empty square matrix", -1);
  if (!sigma.allFinite()) throw CovarianceError("covariance contains non-finite entries", -1);
  const double scale = std::max(sigma.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw CovarianceError("covariance is not symmetric", -1);

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    double d = sigma(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > 0.0)) {
      std::ostringstream os;
      os << "covariance is not positive definite: pivot " << j << " is " << d;
      throw CovarianceError(os.str(), j);
    }
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < m; ++i)
      l(i, j) = (sigma(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / l(j, j);
  }
  return {l};
}

ChiDistribution::ChiDistribution(int dof) : dof_(dof), norm_(0.0), log_norm_(0.0) {
  if (dof < 1) throw InvalidArgument("chi distribution needs at least one degree of freedom");
  const double half = 0.5 * dof;
  log_norm_ = -((half - 1.0) * std::numbers::ln2 + std::lgamma(half));
  norm_ = std::exp(log_norm_);
}

double ChiDistribution::cdf(double t) const {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("chi_cdf: argument must be >= 0");
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return 1.0;
  return boost::math::gamma_p(0.5 * dof_, 0.5 * t * t);
}

double ChiDistribution::pdf(double t) const {
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("chi_pdf: argument must be >= 0");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return dof_ == 1 ? norm_ : 0.0;
  return std::exp(log_norm_ + (dof_ - 1) * std::log(t) - 0.5 * t * t);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

namespace {
Eigen::VectorXd unit_gaussian(std::mt19937_64& gen, int m) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(m);
  double n2 = 0.0;
  do {
    for (int i = 0; i < m; ++i) v[i] = normal(gen);
    n2 = v.squaredNorm();
  } while (n2 < 1e-24);
  return v / std::sqrt(n2);
}
}  // namespace

DirectionSet sample_sphere(int m, std::size_t n, std::uint64_t seed, bool antithetic) {
  if (m < 1) throw InvalidArgument("sample_sphere: dimension must be >= 1");
  if (n < 1) throw InvalidArgument("sample_sphere: need at least one direction");
  DirectionSet set;
  set.dim = static_cast<std::size_t>(m);
  if (m == 1) {
    set.provenance = DirectionProvenance::exact_two_point;
    set.directions = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    set.weights = {0.5, 0.5};
    return set;
  }
  if (antithetic) {
    set.provenance = DirectionProvenance::antithetic;
    const std::size_t pairs = (n + 1) / 2;
    set.directions.reserve(2 * pairs);
    for (std::size_t k = 0; k < pairs; ++k) {
      auto gen = make_stream(seed, k);
      Eigen::VectorXd v = unit_gaussian(gen, m);
      set.directions.push_back(v);
      set.directions.push_back(-v);
    }
  } else {
    set.provenance = DirectionProvenance::seeded_gaussian_normalized;
    set.directions.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      auto gen = make_stream(seed, k);
      set.directions.push_back(unit_gaussian(gen, m));
    }
  }
  set.weights.assign(set.directions.size(), 1.0 / static_cast<double>(set.directions.size()));
  return set;
}

std::vector<Eigen::VectorXd> sample_gaussian(const CovarianceFactor& factor, std::size_t n,
                                             std::uint64_t seed) {
  const auto m = static_cast<Eigen::Index>(factor.dim());
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  auto gen = make_stream(seed, 0);
  std::normal_distribution<double> normal;
  Eigen::VectorXd xi(m);
  for (std::size_t k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) xi[i] = normal(gen);
    out.push_back(factor.apply(xi));
  }
  return out;
}

std::vector<Eigen::VectorXd> sample_uniform_box(const Eigen::VectorXd& lower,
                                                const Eigen::VectorXd& upper, std::size_t n,
                                                std::uint64_t seed) {
  if (lower.size() != upper.size() || (upper - lower).minCoeff() < 0.0)
    throw InvalidArgument("sample_uniform_box: need lower <= upper componentwise");
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  auto gen = make_stream(seed, 0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    Eigen::VectorXd z(lower.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = lower[i] + (upper[i] - lower[i]) * uni(gen);
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace probust
