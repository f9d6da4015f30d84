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

// Spherical-radial evaluation of the probability function
//
//   phi(u) = P( max_x S(u, xi)(x) <= alpha ),   xi ~ N(0, Sigma),
//
// and of an element of its Clarke subdifferential.  Along a ray z = r L v the
// state is affine in r, base + r * ray, so the radius rho(u,v) of the feasible
// segment is a nodal minimum of (alpha - base(x)) / ray(x) over nodes with
// ray(x) > 0, and the radial probability is the chi distribution function at rho.

#include <Eigen/Core>

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "probust/gaussian.hpp"
#include "probust/grid_pde.hpp"
#include "probust/problem.hpp"

namespace probust {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// How a subgradient element is selected when several nodes are active on a ray.
enum class Selection {
  average,  ///< uniform convex combination over the active set
  first,    ///< lowest node index
};

struct SrdOptions {
  /// Relative tolerance on gamma(x) defining the active set.
  double tol_active = 1e-8;
  /// Nodes with ray(x) <= ray_cutoff * ||ray||_inf are treated as non-positive.
  double ray_cutoff = 1e-12;
  Selection selection = Selection::average;
};

/// State along the ray r -> S(u, r L v): base + r * ray.
struct RayDecomposition {
  StateField base;  ///< S(u, 0)
  StateField ray;   ///< P(0, L v)
  Eigen::VectorXd direction;
};

struct RadialResult {
  double rho = kInfinity;
  std::vector<NodeIndex> active_nodes;  ///< empty iff rho is infinite
  double e = 1.0;                       ///< chi distribution function at rho

  bool finite() const noexcept { return rho < kInfinity; }
};

/// Throws SlaterViolation when max S(u,0) >= alpha.
RayDecomposition ray_decompose(const Problem& problem, const ControlField& u,
                               const Eigen::VectorXd& v);

RadialResult radius(const RayDecomposition& decomp, double alpha, const ChiDistribution& chi,
                    const SrdOptions& options = {});

/// Convenience overload taking the chi distribution from the direction length.
RadialResult radius(const RayDecomposition& decomp, double alpha, double tol_active = 1e-8);

/// Per-direction record shared by evaluation reports and subgradients.
struct DirectionReport {
  std::size_t index = 0;
  Eigen::VectorXd v;
  double rho = kInfinity;
  double e = 1.0;
  std::vector<NodeIndex> active_nodes;
  /// w_j * chi(rho_j); zero for infinite radii.
  double selection_weight = 0.0;

  bool multi_active() const noexcept { return active_nodes.size() >= 2; }
};

struct ProbabilityEvaluation {
  double value = 1.0;
  std::vector<DirectionReport> directions;
};

/// Weighted sum of radial probabilities over the direction set.
double probability(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                   const SrdOptions& options = {});

ProbabilityEvaluation evaluate_probability(const Problem& problem, const ControlField& u,
                                           const DirectionSet& dirs,
                                           const SrdOptions& options = {});

/// Selected subgradient field of phi together with the per-direction active
/// sets, from which other selections can be reconstructed.
struct SubgradientField {
  ControlField values;
  double phi = 1.0;
  std::vector<DirectionReport> per_direction;

  /// True when some ray with finite radius has two or more active nodes.
  bool multi_active() const noexcept;
};

/// -sum_j w_j chi(rho_j) * sel_{x in M*_j} u_x / ray_j(x).  All representers
/// are aggregated into a single adjoint solve.
SubgradientField subgradient(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                             const SrdOptions& options = {});

/// g(u, z) = max_x S(u,z)(x) - alpha.
double constraint_value(const Problem& problem, const ControlField& u, const Eigen::VectorXd& z);

/// (r, g(u, r L v)) for each r in r_grid.
std::vector<std::pair<double, double>> radial_curve(const Problem& problem, const ControlField& u,
                                                    const Eigen::VectorXd& v,
                                                    std::span<const double> r_grid);

}  // namespace probust
