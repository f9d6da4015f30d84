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

#include "probust/robust_as.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "probust/errors.hpp"

namespace probust {

namespace {

constexpr double kInf() { return std::numeric_limits<double>::infinity(); }

std::vector<double> linspace(double a, double b, int n) {
  if (n <= 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  out.back() = b;
  return out;
}

std::vector<Eigen::VectorXd> tensor_grid(const std::vector<std::vector<double>>& axes) {
  std::vector<Eigen::VectorXd> out{Eigen::VectorXd(static_cast<Eigen::Index>(axes.size()))};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    std::vector<Eigen::VectorXd> next;
    next.reserve(out.size() * axes[i].size());
    for (const auto& head : out) {
      for (double v : axes[i]) {
        Eigen::VectorXd z = head;
        z[static_cast<Eigen::Index>(i)] = v;
        next.push_back(std::move(z));
      }
    }
    out = std::move(next);
  }
  return out;
}

int points_on_axis(const UncertaintySet& xi, std::size_t i, bool degenerate) {
  if (degenerate) return 1;
  if (xi.resolution.empty()) return 2;
  return std::max(2, xi.resolution[i]);
}

// Lawson-Hanson active set for  min 1/4 mu^T G mu - c^T mu  s.t. mu >= 0,
// G symmetric positive definite.  `mu` is a feasible warm start.
Eigen::VectorXd nonnegative_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, Eigen::VectorXd mu) {
  const Eigen::Index n = c.size();
  std::vector<bool> passive(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) passive[static_cast<std::size_t>(i)] = mu[i] > 0.0;
  const double scale = c.cwiseAbs().maxCoeff() + G.cwiseAbs().maxCoeff() * std::max(1.0, mu.cwiseAbs().maxCoeff());
  const double tol = 1e-14 * std::max(scale, 1e-300);

  auto settle = [&]() {
    for (int guard = 0; guard < 4 * n + 8; ++guard) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
      if (idx.empty()) {
        mu.setZero();
        return;
      }
      const auto k = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd Gp(k, k);
      Eigen::VectorXd cp(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        cp[a] = 2.0 * c[idx[a]];
        for (Eigen::Index b = 0; b < k; ++b) Gp(a, b) = G(idx[a], idx[b]);
      }
      const Eigen::VectorXd s = Gp.ldlt().solve(cp);
      if ((s.array() > 0.0).all()) {
        mu.setZero();
        for (Eigen::Index a = 0; a < k; ++a) mu[idx[a]] = s[a];
        return;
      }
      double step = 1.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        if (s[a] <= 0.0) step = std::min(step, mu[idx[a]] / (mu[idx[a]] - s[a]));
      }
      for (Eigen::Index a = 0; a < k; ++a) {
        const Eigen::Index i = idx[a];
        mu[i] += step * (s[a] - mu[i]);
        if (mu[i] <= tol) {
          mu[i] = 0.0;
          passive[static_cast<std::size_t>(i)] = false;
        }
      }
    }
  };

  settle();
  for (int outer = 0; outer < 4 * n + 8; ++outer) {
    const Eigen::VectorXd w = c - 0.5 * (G * mu);
    Eigen::Index best = -1;
    double top = tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w[i] > top) {
        top = w[i];
        best = i;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    settle();
    if (mu[best] <= 0.0) break;  // round-off cycle guard
  }
  return mu;
}

}  // namespace

UncertaintySet UncertaintySet::box(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<int> resolution) {
  UncertaintySet s;
  s.kind = Kind::box;
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  s.resolution = std::move(resolution);
  s.validate();
  return s;
}

UncertaintySet UncertaintySet::ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape, double radius,
                                         std::vector<int> resolution) {
  UncertaintySet s;
  s.kind = Kind::ellipsoid;
  s.center = std::move(center);
  s.shape = std::move(shape);
  s.radius = radius;
  s.resolution = std::move(resolution);
  s.validate();
  return s;
}

std::size_t UncertaintySet::dim() const noexcept {
  return static_cast<std::size_t>(kind == Kind::box ? lower.size() : center.size());
}

void UncertaintySet::validate() const {
  const std::size_t m = dim();
  if (m == 0) throw InvalidArgument("uncertainty set has dimension zero");
  if (!resolution.empty() && resolution.size() != m)
    throw InvalidArgument("uncertainty set resolution needs one entry per coordinate");
  for (int r : resolution)
    if (r < 1) throw InvalidArgument("uncertainty set resolution must be positive");
  if (kind == Kind::box) {
    if (upper.size() != lower.size()) throw InvalidArgument("box bounds differ in length");
    if (!lower.allFinite() || !upper.allFinite()) throw InvalidArgument("box bounds must be finite");
    if ((lower.array() > upper.array()).any()) throw InvalidArgument("box lower bound exceeds upper bound");
  } else {
    if (shape.rows() != static_cast<Eigen::Index>(m) || shape.cols() != static_cast<Eigen::Index>(m))
      throw InvalidArgument("ellipsoid shape matrix must be m x m");
    if (!center.allFinite() || !shape.allFinite()) throw InvalidArgument("ellipsoid data must be finite");
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("ellipsoid radius must be finite and >= 0");
  }
}

bool UncertaintySet::contains(const Eigen::VectorXd& z, double tol) const {
  if (static_cast<std::size_t>(z.size()) != dim()) return false;
  if (kind == Kind::box)
    return (z.array() >= lower.array() - tol).all() && (z.array() <= upper.array() + tol).all();
  const Eigen::VectorXd d = z - center;
  if (radius == 0.0) return d.norm() <= tol;
  const Eigen::VectorXd s = shape.colPivHouseholderQr().solve(d / radius);
  return (shape * s * radius - d).norm() <= tol * (1.0 + d.norm()) * 1e3 && s.norm() <= 1.0 + tol;
}

std::vector<Eigen::VectorXd> UncertaintySet::grid_points() const {
  validate();
  const std::size_t m = dim();
  std::vector<std::vector<double>> axes(m);
  if (kind == Kind::box) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      axes[i] = linspace(lower[ii], upper[ii], points_on_axis(*this, i, lower[ii] == upper[ii]));
    }
    return tensor_grid(axes);
  }
  for (std::size_t i = 0; i < m; ++i) axes[i] = linspace(-1.0, 1.0, points_on_axis(*this, i, radius == 0.0));
  std::vector<Eigen::VectorXd> out;
  for (const Eigen::VectorXd& s : tensor_grid(axes))
    if (s.norm() <= 1.0 + 1e-12) out.push_back(center + radius * shape * s);
  if (radius > 0.0) {
    for (std::size_t i = 0; i < m; ++i) {
      for (double sign : {-1.0, 1.0}) {
        Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
        s[static_cast<Eigen::Index>(i)] = sign;
        out.push_back(center + radius * shape * s);
      }
    }
  }
  return out;
}

WorstCaseTable worst_case(const Problem& problem, const UncertaintySet& xi) {
  xi.validate();
  const std::size_t m = problem.m();
  if (xi.dim() != m) throw InvalidArgument("uncertainty set dimension does not match m");
  const std::size_t nodes = problem.grid().num_nodes();
  WorstCaseTable t{problem.y0(), std::vector<Eigen::VectorXd>(nodes)};
  Eigen::VectorXd w(static_cast<Eigen::Index>(m));
  for (std::size_t n = 0; n < nodes; ++n) {
    const auto nn = static_cast<Eigen::Index>(n);
    for (std::size_t i = 0; i < m; ++i) w[static_cast<Eigen::Index>(i)] = problem.basis_states()[i][nn];
    Eigen::VectorXd z;
    if (xi.kind == UncertaintySet::Kind::box) {
      z = xi.upper;
      for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w[i] < 0.0) z[i] = xi.lower[i];
    } else {
      const Eigen::VectorXd mtw = xi.shape.transpose() * w;
      const double nrm = mtw.norm();
      z = xi.center;
      if (nrm > 0.0) z += xi.radius * (xi.shape * mtw) / nrm;
    }
    t.offset[nn] += z.dot(w);
    t.z[n] = std::move(z);
  }
  return t;
}

WorstCaseTable worst_case(const PoissonOperator& op, const ParametricSource& source, const UncertaintySet& xi) {
  xi.validate();
  if (!source.f) throw InvalidArgument("parametric source has no callback");
  if (xi.dim() != source.dim) throw InvalidArgument("uncertainty set dimension does not match the source");
  const Grid& g = op.grid();
  const std::size_t nodes = g.num_nodes();
  WorstCaseTable t{Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nodes), -kInf()),
                   std::vector<Eigen::VectorXd>(nodes)};
  for (const Eigen::VectorXd& z : xi.grid_points()) {
    const Eigen::VectorXd rhs = g.sample_interior([&](double x, double y) { return source.f(x, y, z); });
    const Eigen::VectorXd s = op.solve_state(rhs).values;
    for (std::size_t n = 0; n < nodes; ++n) {
      const auto nn = static_cast<Eigen::Index>(n);
      if (s[nn] > t.offset[nn]) {
        t.offset[nn] = s[nn];
        t.z[n] = z;
      }
    }
  }
  return t;
}

RobustConstraintValue robust_constraint(const PoissonOperator& op, double alpha, const WorstCaseTable& table,
                                        const ControlField& u, double tol_active) {
  const Grid& g = op.grid();
  if (!(u.grid == g)) throw InvalidArgument("control lives on a different grid");
  const Eigen::VectorXd y = op.solve_state(u.values).values + table.offset;
  const double top = y.maxCoeff();
  RobustConstraintValue out;
  out.value = top - alpha;
  for (Eigen::Index n = 0; n < y.size(); ++n) {
    if (y[n] >= top - tol_active)
      out.argmax.push_back({static_cast<NodeIndex>(n), table.z[static_cast<std::size_t>(n)], y[n]});
  }
  return out;
}

RobustConstraintValue robust_constraint(const Problem& problem, const ControlField& u, const UncertaintySet& xi,
                                        double tol_active) {
  problem.check_control(u);
  return robust_constraint(problem.op(), problem.alpha(), worst_case(problem, xi), u, tol_active);
}

RobustConstraintValue robust_constraint(const PoissonOperator& op, double alpha, const ParametricSource& source,
                                        const ControlField& u, const UncertaintySet& xi, double tol_active) {
  return robust_constraint(op, alpha, worst_case(op, source, xi), u, tol_active);
}

double AtomicMeasure::total_mass() const noexcept {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.weight;
  return s;
}

NormalizedMeasure normalize_measure(const AtomicMeasure& measure) {
  for (const Atom& a : measure.atoms)
    if (!(a.weight >= 0.0)) throw InvalidArgument("measure weights must be nonnegative");
  NormalizedMeasure out;
  out.lambda_star = measure.total_mass();
  if (!(out.lambda_star > 0.0)) {
    out.lambda_star = 0.0;
    out.probability = measure;
    return out;
  }
  out.defined = true;
  out.probability = measure;
  for (Atom& a : out.probability.atoms) {
    const double target = a.weight;
    double q = target / out.lambda_star;
    for (int k = 0; k < 8 && q * out.lambda_star != target; ++k)
      q = std::nextafter(q, q * out.lambda_star < target ? kInf() : -kInf());
    a.weight = q;
    // Rounded q * lambda* - target; subtracting it inside one fma lands on target.
    out.residual.push_back(std::fma(q, out.lambda_star, -target));
  }
  return out;
}

AtomicMeasure NormalizedMeasure::reconstruct() const {
  AtomicMeasure m = probability;
  if (!defined) {
    for (Atom& a : m.atoms) a.weight = 0.0;
    return m;
  }
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    const double r = k < residual.size() ? residual[k] : 0.0;
    m.atoms[k].weight = std::fma(m.atoms[k].weight, lambda_star, -r);
  }
  return m;
}

namespace {

void validate_sip_options(const SipOptions& o) {
  if (!(o.tol_feasibility > 0.0 && o.tol_active > 0.0) || o.max_exchange < 1)
    throw InvalidArgument("invalid exchange method options");
}

}  // namespace

SipResult sip_solve(const PoissonOperator& op, double alpha, const Eigen::VectorXd& target,
                    const WorstCaseTable& table, const SipOptions& options) {
  validate_sip_options(options);
  const Grid& g = op.grid();
  if (target.size() != static_cast<Eigen::Index>(g.num_interior()))
    throw InvalidArgument("target has the wrong length");
  for (NodeIndex n = 0; n < g.num_nodes(); ++n) {
    if (!g.is_interior(n) && table.offset[static_cast<Eigen::Index>(n)] >= alpha) {
      std::ostringstream msg;
      msg << "no robust Slater point: worst-case boundary state "
          << table.offset[static_cast<Eigen::Index>(n)] << " >= alpha = " << alpha;
      throw SolverFailure(msg.str());
    }
  }

  std::vector<NodeIndex> cut_nodes;
  std::vector<Eigen::VectorXd> reps;
  Eigen::MatrixXd G(0, 0);
  Eigen::VectorXd c(0);
  Eigen::VectorXd mu(0);
  Eigen::VectorXd u = target;

  SipResult res;
  for (int round = 0;; ++round) {
    const Eigen::VectorXd y = op.solve_state(u).values + table.offset;
    NodeIndex worst = 0;
    double viol = -kInf();
    for (NodeIndex n = 0; n < g.num_nodes(); ++n) {
      if (!g.is_interior(n)) continue;
      const double v = y[static_cast<Eigen::Index>(n)] - alpha;
      if (v > viol) {
        viol = v;
        worst = n;
      }
    }
    res.max_violation = std::max(viol, (y.maxCoeff() - alpha));
    res.exchange_rounds = round;
    if (viol <= options.tol_feasibility) break;
    if (round >= options.max_exchange)
      throw SolverFailure("exchange method hit the round cap with violation " + std::to_string(viol));
    if (std::find(cut_nodes.begin(), cut_nodes.end(), worst) != cut_nodes.end()) {
      std::ostringstream msg;
      msg << "exchange method stalled: constraint at node " << worst << " still violated by " << viol;
      throw SolverFailure(msg.str());
    }

    cut_nodes.push_back(worst);
    reps.push_back(representer(op, worst).values);
    const auto k = static_cast<Eigen::Index>(reps.size());
    G.conservativeResize(k, k);
    for (Eigen::Index l = 0; l < k; ++l) {
      const double v = g.inner(reps.back(), reps[static_cast<std::size_t>(l)]);
      G(k - 1, l) = v;
      G(l, k - 1) = v;
    }
    c.conservativeResize(k);
    c[k - 1] = g.inner(reps.back(), target) - (alpha - table.offset[static_cast<Eigen::Index>(worst)]);
    mu.conservativeResize(k);
    mu[k - 1] = 0.0;
    mu = nonnegative_qp(G, c, mu);

    u = target;
    for (Eigen::Index l = 0; l < k; ++l)
      if (mu[l] > 0.0) u -= 0.5 * mu[l] * reps[static_cast<std::size_t>(l)];
    res.subproblem_values.push_back(g.cell_area() * (u - target).squaredNorm());
  }

  const Eigen::VectorXd y = op.solve_state(u).values + table.offset;
  Eigen::VectorXd station = 2.0 * (u - target);
  res.min_atom_slack = 0.0;
  bool first = true;
  for (std::size_t l = 0; l < cut_nodes.size(); ++l) {
    const double w = mu[static_cast<Eigen::Index>(l)];
    if (!(w > 0.0)) continue;
    res.measure.atoms.push_back({cut_nodes[l], table.z[cut_nodes[l]], w});
    station += w * reps[l];
    const double slack = y[static_cast<Eigen::Index>(cut_nodes[l])] - alpha;
    res.min_atom_slack = first ? slack : std::min(res.min_atom_slack, slack);
    first = false;
  }
  res.u_star = u;
  res.objective_value = g.cell_area() * (u - target).squaredNorm();
  res.stationarity_residual = g.norm(station);
  return res;
}

SipResult sip_solve(const Problem& problem, const UncertaintySet& xi, const SipOptions& options) {
  return sip_solve(problem.op(), problem.alpha(), problem.objective_target(), worst_case(problem, xi), options);
}

ScenarioSet ScenarioSet::gaussian(const CovarianceFactor& factor, std::size_t n, std::uint64_t seed) {
  return {sample_gaussian(factor, n, seed), seed};
}

ScenarioSet ScenarioSet::uniform(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, std::size_t n,
                                 std::uint64_t seed) {
  return {sample_uniform_box(lower, upper, n, seed), seed};
}

FeasibilityReport as_feasibility(const Problem& problem, const ControlField& u, const ScenarioSet& scenarios,
                                 double tol) {
  problem.check_control(u);
  const Eigen::VectorXd base = problem.control_state(u) + problem.y0();
  FeasibilityReport r;
  r.max_violation = -kInf();
  for (const Eigen::VectorXd& z : scenarios.draws) {
    if (static_cast<std::size_t>(z.size()) != problem.m())
      throw InvalidArgument("scenario length does not match m");
    const double v = (base + problem.combine_basis(z)).maxCoeff() - problem.alpha();
    r.max_violation = std::max(r.max_violation, v);
    if (v > tol) ++r.violation_count;
  }
  return r;
}

FeasibilityReport as_feasibility(const PoissonOperator& op, double alpha, const ParametricSource& source,
                                 const ControlField& u, const ScenarioSet& scenarios, double tol) {
  if (!source.f) throw InvalidArgument("parametric source has no callback");
  const Grid& g = op.grid();
  if (!(u.grid == g)) throw InvalidArgument("control lives on a different grid");
  FeasibilityReport r;
  r.max_violation = -kInf();
  for (const Eigen::VectorXd& z : scenarios.draws) {
    if (static_cast<std::size_t>(z.size()) != source.dim)
      throw InvalidArgument("scenario length does not match the source");
    const Eigen::VectorXd rhs = u.values + g.sample_interior([&](double x, double y) { return source.f(x, y, z); });
    const double v = std::max(0.0, op.solve(rhs).maxCoeff()) - alpha;
    r.max_violation = std::max(r.max_violation, v);
    if (v > tol) ++r.violation_count;
  }
  return r;
}

LscReport lsc_equivalence_check(const std::function<double(const Eigen::VectorXd&)>& h, bool declared_lsc,
                                const UncertaintySet& support, const ScenarioSet& scenarios, double tol) {
  LscReport r;
  r.declared_lsc = declared_lsc;
  for (const Eigen::VectorXd& z : scenarios.draws)
    if (h(z) > tol) ++r.scenario_violations;
  r.as_feasible = r.scenario_violations == 0;

  r.support_sup = -kInf();
  const std::vector<Eigen::VectorXd> pts = support.grid_points();
  for (const Eigen::VectorXd& z : pts) {
    const double v = h(z);
    if (v > r.support_sup) {
      r.support_sup = v;
      r.support_argmax = z;
    }
    // A jump that does not shrink with the probe distance breaks lower semicontinuity.
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double width = 1.0;
      if (support.kind == UncertaintySet::Kind::box) width = std::max(support.upper[i] - support.lower[i], 1e-12);
      const double delta = 1e-5 * width;
      for (double sign : {-1.0, 1.0}) {
        Eigen::VectorXd near = z;
        near[i] += sign * delta;
        Eigen::VectorXd nearer = z;
        nearer[i] += sign * 0.1 * delta;
        if (!support.contains(near) || !support.contains(nearer)) continue;
        const double d1 = v - h(near);
        const double d2 = v - h(nearer);
        if (d1 > tol && d2 > 0.5 * d1) r.probed_lsc = false;
      }
    }
  }
  r.robust_feasible = r.support_sup <= tol;
  return r;
}

Eigen::VectorXd adjoint_from_multiplier(const PoissonOperator& op, const Eigen::VectorXd& lambda) {
  return op.solve(lambda) / op.grid().cell_area();
}

Eigen::VectorXd multiplier_from_adjoint(const PoissonOperator& op, const Eigen::VectorXd& p) {
  return op.grid().cell_area() * op.apply(p);
}

ScenarioKktReport as_kkt_scenario_residual(const Problem& problem, const ControlField& u,
                                           const std::vector<Eigen::VectorXd>& p_fields,
                                           const ScenarioSet& scenarios, double tol) {
  problem.check_control(u);
  if (p_fields.size() != scenarios.draws.size())
    throw InvalidArgument("need one adjoint state per scenario");
  const Grid& g = problem.grid();
  const auto ni = static_cast<Eigen::Index>(g.num_interior());
  const Eigen::VectorXd base = problem.control_state(u) + problem.y0();

  ScenarioKktReport r;
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(ni);
  for (std::size_t i = 0; i < p_fields.size(); ++i) {
    if (p_fields[i].size() != ni) throw InvalidArgument("adjoint state has the wrong length");
    const Eigen::VectorXd lambda = multiplier_from_adjoint(problem.op(), p_fields[i]);
    const Eigen::VectorXd y = g.restrict(base + problem.combine_basis(scenarios.draws[i]));
    ScenarioKkt s;
    s.min_multiplier = ni > 0 ? lambda.minCoeff() : 0.0;
    s.nonnegative = s.min_multiplier >= -tol;
    s.complementarity = lambda.dot((y.array() - problem.alpha()).matrix());
    r.all_nonnegative = r.all_nonnegative && s.nonnegative;
    r.max_abs_complementarity = std::max(r.max_abs_complementarity, std::abs(s.complementarity));
    r.scenarios.push_back(s);
    mean += p_fields[i];
  }
  if (!p_fields.empty()) mean /= static_cast<double>(p_fields.size());
  const Eigen::VectorXd grad = 2.0 * (u.values - problem.objective_target());
  r.singular_gap = g.norm(grad + mean);
  return r;
}

}  // namespace probust
