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

// Robust and almost-sure state constraints.  The robust problem
//
//   min F(u)  s.t.  y(u,z)(x) <= alpha  for all x in the closed domain, z in Xi,
//
// is a semi-infinite program.  Its multiplier is a nonnegative measure on
// domain x Xi, represented here by finitely many atoms.  The almost-sure
// problem is checked on finite scenario sets.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "probust/gaussian.hpp"
#include "probust/grid_pde.hpp"
#include "probust/problem.hpp"

namespace probust {

/// Compact parameter set: a box or an ellipsoid {center + radius * M s : |s| <= 1}.
/// `resolution` gives the number of grid points per coordinate used wherever Xi
/// is discretized; box grids always contain the corners.
struct UncertaintySet {
  enum class Kind { box, ellipsoid };

  Kind kind = Kind::box;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd center;
  Eigen::MatrixXd shape;
  double radius = 1.0;
  std::vector<int> resolution;

  static UncertaintySet box(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<int> resolution = {});
  static UncertaintySet ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape, double radius,
                                  std::vector<int> resolution = {});

  std::size_t dim() const noexcept;
  /// Throws InvalidArgument for unbounded or malformed sets.
  void validate() const;
  bool contains(const Eigen::VectorXd& z, double tol = 1e-12) const;
  /// Tensor grid (box) or grid points of the enclosing cube mapped into the
  /// ellipsoid, plus its axis extreme points.
  std::vector<Eigen::VectorXd> grid_points() const;
};

/// Nonaffine parametric source f(x1, x2, z); the state is A^{-1}(u + f(., z)).
struct ParametricSource {
  std::size_t dim = 1;
  std::function<double(double, double, const Eigen::VectorXd&)> f;
};

/// Per-node worst case over Xi of the control-independent part of the state.
struct WorstCaseTable {
  Eigen::VectorXd offset;          ///< all nodes
  std::vector<Eigen::VectorXd> z;  ///< maximizing parameter per node
};

/// Affine model: offset(x) = max_z y0(x) + sum_i z_i w_i(x) in closed form
/// (box corner from the signs of w(x); ellipsoid z* = c + r M M^T w / |M^T w|).
WorstCaseTable worst_case(const Problem& problem, const UncertaintySet& xi);
/// General source: maximum over the grid points of Xi, one solve per point.
WorstCaseTable worst_case(const PoissonOperator& op, const ParametricSource& source,
                          const UncertaintySet& xi);

struct ActivePair {
  NodeIndex node = 0;
  Eigen::VectorXd z;
  double state = 0.0;  ///< y(x, z)
};

struct RobustConstraintValue {
  double value = 0.0;  ///< max_{x,z} y(u,z)(x) - alpha
  std::vector<ActivePair> argmax;
};

RobustConstraintValue robust_constraint(const Problem& problem, const ControlField& u,
                                        const UncertaintySet& xi, double tol_active = 1e-8);
RobustConstraintValue robust_constraint(const PoissonOperator& op, double alpha,
                                        const ParametricSource& source, const ControlField& u,
                                        const UncertaintySet& xi, double tol_active = 1e-8);
/// Same, on a precomputed worst-case table.
RobustConstraintValue robust_constraint(const PoissonOperator& op, double alpha,
                                        const WorstCaseTable& table, const ControlField& u,
                                        double tol_active = 1e-8);

struct Atom {
  NodeIndex node = 0;
  Eigen::VectorXd z;
  double weight = 0.0;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;

  double total_mass() const noexcept;
};

struct NormalizedMeasure {
  double lambda_star = 0.0;
  AtomicMeasure probability;
  /// False for the empty (zero) measure, whose normalized part is undefined.
  bool defined = false;
  /// Per-atom rounding error of lambda* times the normalized weight; keeps
  /// reconstruct() exact where no normalized weight multiplies back exactly.
  std::vector<double> residual;

  AtomicMeasure reconstruct() const;
};

/// mu = lambda* mu~ with lambda* the total mass.  reconstruct() returns the
/// original weights bit for bit.
NormalizedMeasure normalize_measure(const AtomicMeasure& measure);

struct SipOptions {
  double tol_feasibility = 1e-10;
  double tol_active = 1e-8;
  int max_exchange = 2000;
};

struct SipResult {
  Eigen::VectorXd u_star;  ///< interior values
  AtomicMeasure measure;
  double objective_value = 0.0;
  /// ||grad F(u*) + sum_k mu_k u_{x_k}||.
  double stationarity_residual = 0.0;
  /// Robust constraint value at u*.
  double max_violation = 0.0;
  /// Smallest y*(x_k, z_k) - alpha over atoms (0 when there are none).
  double min_atom_slack = 0.0;
  int exchange_rounds = 0;
  /// Optimal values of the successive finite subproblems.
  std::vector<double> subproblem_values;
};

/// Exchange method: the finite subproblem min ||u - t||^2 s.t. (u_xk, u) <= b_k
/// is solved through its nonnegative dual, and the worst violator is added
/// until none exceeds tol_feasibility.  Throws SolverFailure when no robust
/// Slater point can exist (alpha not above the boundary worst case) or the
/// round cap is hit.
SipResult sip_solve(const Problem& problem, const UncertaintySet& xi, const SipOptions& options = {});
/// General form on a worst-case table with explicit target.
SipResult sip_solve(const PoissonOperator& op, double alpha, const Eigen::VectorXd& target,
                    const WorstCaseTable& table, const SipOptions& options = {});

/// Finite sample from the law of the parameter.
struct ScenarioSet {
  std::vector<Eigen::VectorXd> draws;
  std::uint64_t seed = 0;

  static ScenarioSet gaussian(const CovarianceFactor& factor, std::size_t n, std::uint64_t seed);
  static ScenarioSet uniform(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, std::size_t n,
                             std::uint64_t seed);
};

struct FeasibilityReport {
  std::size_t violation_count = 0;
  /// max_i max_x y(u, z_i)(x) - alpha.
  double max_violation = 0.0;
};

FeasibilityReport as_feasibility(const Problem& problem, const ControlField& u,
                                 const ScenarioSet& scenarios, double tol = 1e-9);
FeasibilityReport as_feasibility(const PoissonOperator& op, double alpha, const ParametricSource& source,
                                 const ControlField& u, const ScenarioSet& scenarios, double tol = 1e-9);

struct LscReport {
  bool as_feasible = false;
  bool robust_feasible = false;
  bool declared_lsc = false;
  /// Result of probing h at small offsets around each support grid point;
  /// false when some point sits strictly above its neighbours' values.
  bool probed_lsc = true;
  std::size_t scenario_violations = 0;
  double support_sup = 0.0;
  Eigen::VectorXd support_argmax;

  bool verdicts_agree() const noexcept { return as_feasible == robust_feasible; }
};

/// Compares h(xi) <= 0 on the scenarios with sup of h over the support grid.
LscReport lsc_equivalence_check(const std::function<double(const Eigen::VectorXd&)>& h, bool declared_lsc,
                                const UncertaintySet& support, const ScenarioSet& scenarios,
                                double tol = 1e-9);

/// p = A^{-1} lambda / cell_area: the L2 element pairing with h like the
/// nodal measure lambda pairs with A^{-1} h.  Both vectors are interior.
Eigen::VectorXd adjoint_from_multiplier(const PoissonOperator& op, const Eigen::VectorXd& lambda);
Eigen::VectorXd multiplier_from_adjoint(const PoissonOperator& op, const Eigen::VectorXd& p);

struct ScenarioKkt {
  double min_multiplier = 0.0;
  /// sum_x lambda_x (y(x) - alpha).
  double complementarity = 0.0;
  bool nonnegative = true;
};

struct ScenarioKktReport {
  std::vector<ScenarioKkt> scenarios;
  /// ||grad F(u) + mean_i p_i||, the part only a singular multiplier could carry.
  double singular_gap = 0.0;
  bool all_nonnegative = true;
  double max_abs_complementarity = 0.0;
};

ScenarioKktReport as_kkt_scenario_residual(const Problem& problem, const ControlField& u,
                                           const std::vector<Eigen::VectorXd>& p_fields,
                                           const ScenarioSet& scenarios, double tol = 1e-9);

}  // namespace probust
