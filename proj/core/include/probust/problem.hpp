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

// Problem data of the random Poisson model
//
//   -Laplace y = u + f0 + sum_i z_i phi_i  in D,   y = 0 on the boundary,
//
// together with the assembled operator and the states that every evaluation
// reuses: y0 = A^{-1} f0 and the basis states w_i = A^{-1} phi_i.

#include <Eigen/Core>

#include <memory>
#include <optional>
#include <vector>

#include "probust/gaussian.hpp"
#include "probust/grid_pde.hpp"

namespace probust {

/// Convex quadratic cost ||u - target||^2 in the discrete L2 norm.
struct ObjectiveSpec {
  enum class Kind {
    tracking,         ///< explicit target u_d
    tikhonov,         ///< target 0
    affine_tracking,  ///< target = representer u_x of a node
  };

  Kind kind = Kind::tikhonov;
  Eigen::VectorXd target;  ///< interior values; used by `tracking`
  NodeIndex node = 0;      ///< used by `affine_tracking`

  static ObjectiveSpec tikhonov() { return {}; }
  static ObjectiveSpec tracking(Eigen::VectorXd target) {
    return {Kind::tracking, std::move(target), 0};
  }
  static ObjectiveSpec affine_tracking(NodeIndex node) { return {Kind::affine_tracking, {}, node}; }
};

struct ProblemData {
  Grid grid = Grid::square(3, 0.0, 1.0);
  Eigen::VectorXd f0;                ///< interior values
  std::vector<Eigen::VectorXd> phi;  ///< m basis fields, interior values
  double alpha = 0.0;
  Eigen::MatrixXd sigma;  ///< m x m covariance of the Gaussian parameter
  double p = 0.5;         ///< probability level in (0,1)
  ObjectiveSpec objective;
};

/// Validated problem with its assembled Laplacian.  Immutable; share it by
/// const reference or shared_ptr across threads.
class Problem {
 public:
  explicit Problem(ProblemData data, LinearSolverKind kind = LinearSolverKind::automatic);

  const ProblemData& data() const noexcept { return data_; }
  const Grid& grid() const noexcept { return data_.grid; }
  const PoissonOperator& op() const noexcept { return *op_; }
  std::shared_ptr<const PoissonOperator> op_ptr() const noexcept { return op_; }
  std::size_t m() const noexcept { return data_.phi.size(); }
  double alpha() const noexcept { return data_.alpha; }
  double p() const noexcept { return data_.p; }
  const CovarianceFactor& covariance_factor() const noexcept { return factor_; }
  const ChiDistribution& chi() const noexcept { return chi_; }

  /// y0 = A^{-1} f0 on all nodes.
  const Eigen::VectorXd& y0() const noexcept { return y0_; }
  /// w_i = A^{-1} phi_i on all nodes.
  const std::vector<Eigen::VectorXd>& basis_states() const noexcept { return basis_; }
  /// Resolved objective target (interior values).
  const Eigen::VectorXd& objective_target() const noexcept { return target_; }

  /// S(u,z) = A^{-1}(u + f(.,z)).
  StateField solve_state(const ControlField& u, const Eigen::VectorXd& z) const;
  /// P(u,z) = A^{-1} u + sum_i z_i A^{-1} phi_i (f0 omitted).
  StateField apply_p(const ControlField& u, const Eigen::VectorXd& z) const;
  /// sum_i c_i w_i on all nodes.
  Eigen::VectorXd combine_basis(const Eigen::VectorXd& c) const;
  /// A^{-1} u on all nodes.
  Eigen::VectorXd control_state(const ControlField& u) const;
  ControlField representer(NodeIndex node) const;

  void check_control(const ControlField& u) const;

 private:
  ProblemData data_;
  std::shared_ptr<const PoissonOperator> op_;
  CovarianceFactor factor_;
  ChiDistribution chi_;
  Eigen::VectorXd y0_;
  std::vector<Eigen::VectorXd> basis_;
  Eigen::VectorXd target_;
};

/// Constant C with ||S(u,z)||_inf <= C (||z||_2 + ||u + f0||_L2) on this grid,
/// which also bounds |g(u1,z1) - g(u2,z2)| by C (||u1-u2||_L2 + ||z1-z2||_2).
/// It is the larger of max_x ||u_x||_L2 and max_x ||(w_1(x),...,w_m(x))||_2 and
/// costs one solve per interior node.
double state_bound_constant(const Problem& problem);

}  // namespace probust
