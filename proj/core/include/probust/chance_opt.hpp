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

// min F(u) s.t. phi(u) >= p, solved through the convex reformulation
// phi_tilde(u) = -log phi(u) + log p <= 0 with an augmented Lagrangian method,
// and the KKT certificate  grad F(u*) = lambda g,  g in the Clarke
// subdifferential of phi at u*,  lambda (phi(u*) - p) = 0,  lambda >= 0.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "probust/gaussian.hpp"
#include "probust/problem.hpp"
#include "probust/srd_prob.hpp"

namespace probust {

/// Value of phi and one selected element of its subdifferential (as a Riesz
/// representer in the model's inner product).
struct ProbabilityValue {
  double phi = 1.0;
  Eigen::VectorXd subgradient;
  bool multi_active = false;
};

/// A probability function over a Hilbert space of controls.
class ChanceModel {
 public:
  virtual ~ChanceModel() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const = 0;
  /// Throws SlaterViolation where the radial representation is unavailable.
  virtual ProbabilityValue evaluate(const Eigen::VectorXd& u) const = 0;

  double norm(const Eigen::VectorXd& a) const;
};

/// Convex differentiable cost with Riesz gradient.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const Eigen::VectorXd& u) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& u) const = 0;
  virtual std::optional<Eigen::VectorXd> unconstrained_minimizer() const { return std::nullopt; }
};

/// ||u - target||^2 with inner product weight * (a . b).
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Eigen::VectorXd target, double weight);
  static QuadraticObjective from(const Problem& problem);

  double value(const Eigen::VectorXd& u) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override;
  std::optional<Eigen::VectorXd> unconstrained_minimizer() const override { return target_; }

 private:
  Eigen::VectorXd target_;
  double weight_;
};

/// F(u) = c . u in the Euclidean inner product.
class LinearObjective final : public Objective {
 public:
  explicit LinearObjective(Eigen::VectorXd coefficients) : c_(std::move(coefficients)) {}
  double value(const Eigen::VectorXd& u) const override { return c_.dot(u); }
  Eigen::VectorXd gradient(const Eigen::VectorXd&) const override { return c_; }

 private:
  Eigen::VectorXd c_;
};

/// Probability function of the PDE model evaluated on a frozen direction set
/// (sample-average approximation).
class SrdChanceModel final : public ChanceModel {
 public:
  SrdChanceModel(const Problem& problem, DirectionSet dirs, SrdOptions options = {});

  Eigen::Index dimension() const override;
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const override;
  ProbabilityValue evaluate(const Eigen::VectorXd& u) const override;

  const Problem& problem() const noexcept { return problem_; }
  const DirectionSet& directions() const noexcept { return dirs_; }

 private:
  const Problem& problem_;
  DirectionSet dirs_;
  SrdOptions options_;
};

/// Scalar model phi(u) = P(xi <= u) for xi with density 2(1 - x) on [0,1],
/// i.e. phi(u) = 2u - u^2 on [0,1].
class ScalarDensityModel final : public ChanceModel {
 public:
  Eigen::Index dimension() const override { return 1; }
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const override { return a.dot(b); }
  ProbabilityValue evaluate(const Eigen::VectorXd& u) const override;
};

/// -log(phi) + log(p); +infinity when phi == 0.
double phi_tilde(double phi, double p);
double phi_tilde(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                 const SrdOptions& options = {});

/// Objective value and Riesz gradient under the grid inner product.
std::pair<double, ControlField> objective_value_grad(const Problem& problem, const ControlField& u);

struct SolverOptions {
  int max_outer = 80;
  int max_inner = 400;
  /// Relative to max(||grad F(u*)||, 1e-12).
  double tol_stationarity = 1e-6;
  double tol_complementarity = 1e-8;
  /// Bound on max(0, p - phi(u*)).
  double tol_feasibility = 1e-9;
  double penalty_initial = 10.0;
  double penalty_growth = 5.0;
  double initial_multiplier = 0.0;
  std::size_t directions = 64;
  std::uint64_t seed = 20240607;
  Selection selection = Selection::average;

  void validate() const;
};

struct KktCertificate {
  Eigen::VectorXd u_star;
  double lambda = 0.0;
  /// ||grad F(u*) - lambda g||.
  double stationarity_residual = 0.0;
  /// stationarity_residual / max(||grad F(u*)||, 1e-12).
  double relative_stationarity = 0.0;
  /// |lambda (phi(u*) - p)|.
  double complementarity_residual = 0.0;
  double phi_value = 0.0;
  double p = 0.0;
  double objective_value = 0.0;
  /// |phi(u*) - p| <= max(tol_feasibility, 1e-6 p).
  bool active = false;
  /// The selected subgradient depends on the selection rule.
  bool multi_active = false;
  bool converged = false;
  int outer_iterations = 0;
  std::string message;
};

struct IterationRecord {
  int outer = 0;
  int inner_iterations = 0;
  double u_norm = 0.0;
  double phi = 0.0;
  double phi_tilde = 0.0;
  double lambda = 0.0;
  double penalty = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
};

struct SolveResult {
  KktCertificate certificate;
  std::vector<IterationRecord> log;
};

using ProgressCallback = std::function<void(const IterationRecord&)>;

/// Evaluates both KKT residuals at (u, lambda).
KktCertificate kkt_residual(const ChanceModel& model, const Objective& objective, double p,
                            const Eigen::VectorXd& u, double lambda,
                            const SolverOptions& options = {});

/// Augmented Lagrangian on phi_tilde <= 0.  Throws SolverFailure when no
/// strictly feasible probe point is found or the start violates the Slater
/// condition; an iteration cap returns the best iterate with converged = false.
SolveResult solve(const ChanceModel& model, const Objective& objective, double p,
                  const Eigen::VectorXd& u0, const SolverOptions& options = {},
                  const ProgressCallback& progress = {});

/// PDE problem on the direction set drawn from `options` (directions, seed).
SolveResult solve(const Problem& problem, const SolverOptions& options = {},
                  std::optional<ControlField> u0 = std::nullopt,
                  const ProgressCallback& progress = {});

KktCertificate kkt_residual(const Problem& problem, const DirectionSet& dirs, const ControlField& u,
                            double lambda, const SolverOptions& options = {});

struct SweepRow {
  double p = 0.0;
  double u_star = 0.0;
  double lambda = 0.0;
  double objective = 0.0;
  bool converged = false;
};

/// Solves the scalar model with F(u) = u for each p.
std::vector<SweepRow> multiplier_blowup_sweep(std::span<const double> p_list,
                                              const SolverOptions& options = {});

}  // namespace probust
