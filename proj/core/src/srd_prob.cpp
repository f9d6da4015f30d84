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

#include "probust/srd_prob.hpp"

#include <algorithm>
#include <cmath>

#include "probust/errors.hpp"

namespace probust {

namespace {

StateField expected_state(const Problem& problem, const ControlField& u) {
  StateField base{problem.grid(), problem.control_state(u) + problem.y0()};
  const double top = base.values.maxCoeff();
  if (!(top < problem.alpha())) throw SlaterViolation(top, problem.alpha());
  return base;
}

RadialResult radial(const Eigen::VectorXd& base, const Eigen::VectorXd& ray, double alpha,
                    const ChiDistribution& chi, const SrdOptions& opt) {
  RadialResult out;
  const double cutoff = opt.ray_cutoff * ray.cwiseAbs().maxCoeff();
  double rho = kInfinity;
  for (Eigen::Index n = 0; n < ray.size(); ++n) {
    if (ray[n] > cutoff && ray[n] > 0.0) rho = std::min(rho, (alpha - base[n]) / ray[n]);
  }
  if (rho == kInfinity) return out;
  const double limit = rho + opt.tol_active * std::abs(rho);
  for (Eigen::Index n = 0; n < ray.size(); ++n) {
    if (ray[n] > cutoff && ray[n] > 0.0 && (alpha - base[n]) / ray[n] <= limit)
      out.active_nodes.push_back(static_cast<NodeIndex>(n));
  }
  out.rho = rho;
  out.e = chi.cdf(rho);
  return out;
}

std::vector<DirectionReport> direction_reports(const Problem& problem, const Eigen::VectorXd& base,
                                               const DirectionSet& dirs, const SrdOptions& opt) {
  if (dirs.dim != problem.m())
    throw InvalidArgument("direction set dimension does not match the number of random parameters");
  const ChiDistribution& chi = problem.chi();
  std::vector<DirectionReport> reports(dirs.size());
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    const Eigen::VectorXd ray = problem.combine_basis(problem.covariance_factor().apply(dirs.directions[j]));
    RadialResult r = radial(base, ray, problem.alpha(), chi, opt);
    DirectionReport& rep = reports[j];
    rep.index = j;
    rep.v = dirs.directions[j];
    rep.rho = r.rho;
    rep.e = r.e;
    rep.active_nodes = std::move(r.active_nodes);
    rep.selection_weight = r.finite() ? dirs.weights[j] * chi.pdf(r.rho) : 0.0;
  }
  return reports;
}

double weighted_sum(const DirectionSet& dirs, const std::vector<DirectionReport>& reports) {
  // Fixed index order keeps the reduction bitwise reproducible.
  double s = 0.0;
  for (std::size_t j = 0; j < reports.size(); ++j) s += dirs.weights[j] * reports[j].e;
  return std::clamp(s, 0.0, 1.0);
}

}  // namespace

RayDecomposition ray_decompose(const Problem& problem, const ControlField& u, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != problem.m())
    throw InvalidArgument("direction length does not match m");
  StateField base = expected_state(problem, u);
  StateField ray{problem.grid(), problem.combine_basis(problem.covariance_factor().apply(v))};
  return {std::move(base), std::move(ray), v};
}

RadialResult radius(const RayDecomposition& decomp, double alpha, const ChiDistribution& chi,
                    const SrdOptions& options) {
  return radial(decomp.base.values, decomp.ray.values, alpha, chi, options);
}

RadialResult radius(const RayDecomposition& decomp, double alpha, double tol_active) {
  SrdOptions opt;
  opt.tol_active = tol_active;
  return radius(decomp, alpha, ChiDistribution(static_cast<int>(decomp.direction.size())), opt);
}

ProbabilityEvaluation evaluate_probability(const Problem& problem, const ControlField& u,
                                           const DirectionSet& dirs, const SrdOptions& options) {
  const StateField base = expected_state(problem, u);
  ProbabilityEvaluation out;
  out.directions = direction_reports(problem, base.values, dirs, options);
  out.value = weighted_sum(dirs, out.directions);
  return out;
}

double probability(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                   const SrdOptions& options) {
  return evaluate_probability(problem, u, dirs, options).value;
}

bool SubgradientField::multi_active() const noexcept {
  return std::any_of(per_direction.begin(), per_direction.end(),
                     [](const DirectionReport& r) { return r.multi_active(); });
}

SubgradientField subgradient(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                             const SrdOptions& options) {
  const Grid& g = problem.grid();
  const StateField base = expected_state(problem, u);
  std::vector<DirectionReport> reports = direction_reports(problem, base.values, dirs, options);

  // Coefficients of the Dirac combination sum_x c_x delta_x; the field is then
  // -A^{-1} c / cell_area since u_x = A^{-1} delta_x / cell_area.
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_interior()));
  bool any = false;
  for (std::size_t j = 0; j < reports.size(); ++j) {
    const DirectionReport& rep = reports[j];
    if (rep.rho == kInfinity || rep.selection_weight == 0.0) continue;
    const Eigen::VectorXd ray =
        problem.combine_basis(problem.covariance_factor().apply(dirs.directions[j]));
    auto add = [&](NodeIndex x, double share) {
      coef[static_cast<Eigen::Index>(g.interior_index(x))] +=
          rep.selection_weight * share / ray[static_cast<Eigen::Index>(x)];
    };
    if (options.selection == Selection::first) {
      add(rep.active_nodes.front(), 1.0);
    } else {
      const double share = 1.0 / static_cast<double>(rep.active_nodes.size());
      for (NodeIndex x : rep.active_nodes) add(x, share);
    }
    any = true;
  }

  SubgradientField out{ControlField::zero(g), weighted_sum(dirs, reports), std::move(reports)};
  if (any) out.values.values = -problem.op().solve(coef) / g.cell_area();
  return out;
}

double constraint_value(const Problem& problem, const ControlField& u, const Eigen::VectorXd& z) {
  return problem.solve_state(u, z).values.maxCoeff() - problem.alpha();
}

std::vector<std::pair<double, double>> radial_curve(const Problem& problem, const ControlField& u,
                                                    const Eigen::VectorXd& v,
                                                    std::span<const double> r_grid) {
  if (static_cast<std::size_t>(v.size()) != problem.m())
    throw InvalidArgument("direction length does not match m");
  const Eigen::VectorXd base = problem.control_state(u) + problem.y0();
  const Eigen::VectorXd ray = problem.combine_basis(problem.covariance_factor().apply(v));
  std::vector<std::pair<double, double>> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) out.emplace_back(r, (base + r * ray).maxCoeff() - problem.alpha());
  return out;
}

}  // namespace probust
