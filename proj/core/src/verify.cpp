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

#include "probust/verify.hpp"

#include <cmath>

#include "probust/cases.hpp"
#include "probust/chance_opt.hpp"
#include "probust/robust_as.hpp"
#include "probust/srd_prob.hpp"

namespace probust {

namespace {

VerifyRow compare(CaseId id, std::string check, double measured, double expected, double tol) {
  return {std::string(case_name(id)), std::move(check), measured, expected, tol,
          std::abs(measured - expected) <= tol};
}

void unit_square_rows(const CaseSpec& spec, std::vector<VerifyRow>& rows) {
  const UnitSquareOracle o = oracle_unit_square();
  const Problem problem = cases::unit_square(spec.grid_n, o.p);
  const Grid& g = problem.grid();
  const DirectionSet dirs = sample_sphere(1, 2, 0);
  const ControlField zero = ControlField::zero(g);

  const SubgradientField s = subgradient(problem, zero, dirs);
  rows.push_back(compare(spec.id, "phi(0)", s.phi, o.p, 2e-3));

  const ControlField rep = problem.representer(cases::require_node(g, o.active_x, o.active_y));
  const Eigen::VectorXd expected = o.grad_factor * rep.values;
  const double rel = g.norm(s.values.values - expected) / g.norm(expected);
  rows.push_back(compare(spec.id, "subgradient relative L2 error", rel, 0.0, 2e-2));

  const KktCertificate c = kkt_residual(problem, dirs, zero, o.lambda);
  rows.push_back(compare(spec.id, "relative stationarity at oracle lambda", c.relative_stationarity, 0.0, 2e-2));
  rows.push_back(compare(spec.id, "complementarity at oracle lambda", c.complementarity_residual, 0.0, 1e-3));
}

void square_sine_rows(const CaseSpec& spec, std::vector<VerifyRow>& rows) {
  const Problem problem = cases::square_sine(spec.grid_n);
  const Grid& g = problem.grid();
  const DirectionSet dirs = sample_sphere(1, 2, 0);
  auto curve = [&](double tau) { return probability(problem, cases::square_sine_control(g, tau), dirs); };

  double worst = 0.0;
  const int steps = static_cast<int>(std::lround((spec.tau_max - spec.tau_min) / 0.1));
  for (int k = 0; k <= steps; ++k) {
    const double tau = spec.tau_min + 0.1 * k;
    worst = std::max(worst, std::abs(curve(tau) - oracle_square_sine(tau).phi_tilde));
  }
  rows.push_back(compare(spec.id, "max |phi~(tau) - Phi(1-|tau|)|", worst, 0.0, 2e-3));

  const double h = 1e-3;
  const double at0 = curve(0.0);
  const auto slopes = oracle_square_sine(0.0).slopes_at_zero;
  rows.push_back(compare(spec.id, "left slope at 0", (at0 - curve(-h)) / h, slopes.first, 5e-3));
  rows.push_back(compare(spec.id, "right slope at 0", (curve(h) - at0) / h, slopes.second, 5e-3));
}

void scalar_rows(const CaseSpec& spec, std::vector<VerifyRow>& rows) {
  const ScalarOracle o = oracle_scalar(spec.p);
  const SolveResult r = solve(ScalarDensityModel{}, LinearObjective(Eigen::VectorXd::Ones(1)), spec.p,
                              Eigen::VectorXd::Ones(1));
  rows.push_back(compare(spec.id, "u*", r.certificate.u_star[0], o.u_star, 1e-6));
  rows.push_back(compare(spec.id, "lambda", r.certificate.lambda, o.lambda, 1e-4));
}

void discontinuous_rows(const CaseSpec& spec, std::vector<VerifyRow>& rows) {
  const DiscontinuousOracle o = oracle_discontinuous();
  const cases::Discontinuous c = cases::discontinuous(spec.grid_n);
  const Grid& g = c.op->grid();
  const ControlField zero = ControlField::zero(g);

  const RobustConstraintValue rv = robust_constraint(*c.op, c.alpha, c.source, zero, c.support);
  rows.push_back(compare(spec.id, "robust constraint at u=0", rv.value, o.witness_value - c.alpha, 1e-12));
  bool witness = rv.argmax.size() == 1 && std::abs(g.coords(rv.argmax[0].node)[0] - o.witness_x) < 1e-12 &&
                 rv.argmax[0].z[0] == o.witness_z;
  rows.push_back({std::string(case_name(spec.id)), "witness (1/2, 1/2)", witness ? 1.0 : 0.0, 1.0, 0.0, witness});

  const ScenarioSet draws = ScenarioSet::uniform(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1), 10000, 11);
  const FeasibilityReport f = as_feasibility(*c.op, c.alpha, c.source, zero, draws);
  rows.push_back(compare(spec.id, "a.s. violations over 1e4 draws", static_cast<double>(f.violation_count), 0.0, 0.0));
}

}  // namespace

CaseSpec default_case_spec(CaseId id) {
  CaseSpec s;
  s.id = id;
  s.grid_n = id == CaseId::discontinuous ? 21 : 65;
  return s;
}

std::vector<VerifyRow> verify_case(const CaseSpec& spec) {
  spec.validate();
  std::vector<VerifyRow> rows;
  switch (spec.id) {
    case CaseId::unit_square:
      unit_square_rows(spec, rows);
      break;
    case CaseId::square_sine:
      square_sine_rows(spec, rows);
      break;
    case CaseId::scalar_density:
      scalar_rows(spec, rows);
      break;
    case CaseId::discontinuous:
      discontinuous_rows(spec, rows);
      break;
  }
  return rows;
}

std::vector<VerifyRow> verify_all() {
  std::vector<VerifyRow> rows;
  for (CaseId id : {CaseId::square_sine, CaseId::unit_square, CaseId::scalar_density, CaseId::discontinuous}) {
    std::vector<VerifyRow> part = verify_case(default_case_spec(id));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

}  // namespace probust
