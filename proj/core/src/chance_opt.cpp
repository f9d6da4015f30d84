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

#include "probust/chance_opt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "probust/errors.hpp"

namespace probust {

double ChanceModel::norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }

QuadraticObjective::QuadraticObjective(Eigen::VectorXd target, double weight)
    : target_(std::move(target)), weight_(weight) {
  if (!(weight > 0.0)) throw InvalidArgument("objective weight must be positive");
}

QuadraticObjective QuadraticObjective::from(const Problem& problem) {
  return QuadraticObjective(problem.objective_target(), problem.grid().cell_area());
}

double QuadraticObjective::value(const Eigen::VectorXd& u) const {
  return weight_ * (u - target_).squaredNorm();
}

Eigen::VectorXd QuadraticObjective::gradient(const Eigen::VectorXd& u) const {
  return 2.0 * (u - target_);
}

SrdChanceModel::SrdChanceModel(const Problem& problem, DirectionSet dirs, SrdOptions options)
    : problem_(problem), dirs_(std::move(dirs)), options_(options) {
  if (dirs_.dim != problem.m())
    throw InvalidArgument("direction set dimension does not match the number of random parameters");
}

Eigen::Index SrdChanceModel::dimension() const {
  return static_cast<Eigen::Index>(problem_.grid().num_interior());
}

double SrdChanceModel::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return problem_.grid().inner(a, b);
}

ProbabilityValue SrdChanceModel::evaluate(const Eigen::VectorXd& u) const {
  SubgradientField s = subgradient(problem_, ControlField{problem_.grid(), u}, dirs_, options_);
  return {s.phi, std::move(s.values.values), s.multi_active()};
}

ProbabilityValue ScalarDensityModel::evaluate(const Eigen::VectorXd& u) const {
  if (u.size() != 1) throw InvalidArgument("scalar model expects a one-dimensional control");
  const double x = u[0];
  if (x <= 0.0) return {0.0, Eigen::VectorXd::Zero(1), false};
  if (x >= 1.0) return {1.0, Eigen::VectorXd::Zero(1), false};
  return {2.0 * x - x * x, Eigen::VectorXd::Constant(1, 2.0 - 2.0 * x), false};
}

double phi_tilde(double phi, double p) {
  if (!(phi > 0.0)) return std::numeric_limits<double>::infinity();
  return -std::log(phi) + std::log(p);
}

double phi_tilde(const Problem& problem, const ControlField& u, const DirectionSet& dirs,
                 const SrdOptions& options) {
  return phi_tilde(probability(problem, u, dirs, options), problem.p());
}

std::pair<double, ControlField> objective_value_grad(const Problem& problem, const ControlField& u) {
  problem.check_control(u);
  const QuadraticObjective f = QuadraticObjective::from(problem);
  return {f.value(u.values), ControlField{problem.grid(), f.gradient(u.values)}};
}

void SolverOptions::validate() const {
  if (max_outer < 1 || max_inner < 1) throw InvalidArgument("iteration caps must be positive");
  if (!(tol_stationarity > 0 && tol_complementarity > 0 && tol_feasibility > 0))
    throw InvalidArgument("solver tolerances must be positive");
  if (!(penalty_growth > 1.0)) throw InvalidArgument("penalty growth factor must exceed 1");
  if (!(penalty_initial > 0.0)) throw InvalidArgument("initial penalty must be positive");
  if (!(initial_multiplier >= 0.0)) throw InvalidArgument("initial multiplier must be nonnegative");
  if (directions < 1) throw InvalidArgument("direction count must be positive");
}

KktCertificate kkt_residual(const ChanceModel& model, const Objective& objective, double p,
                            const Eigen::VectorXd& u, double lambda, const SolverOptions& options) {
  const ProbabilityValue pv = model.evaluate(u);
  const Eigen::VectorXd grad_f = objective.gradient(u);
  KktCertificate c;
  c.u_star = u;
  c.lambda = lambda;
  c.p = p;
  c.phi_value = pv.phi;
  c.objective_value = objective.value(u);
  c.stationarity_residual = model.norm(grad_f - lambda * pv.subgradient);
  c.relative_stationarity = c.stationarity_residual / std::max(model.norm(grad_f), 1e-12);
  c.complementarity_residual = std::abs(lambda * (pv.phi - p));
  c.active = std::abs(pv.phi - p) <= std::max(options.tol_feasibility, 1e-6 * p);
  c.multi_active = pv.multi_active;
  c.converged = lambda >= 0.0 && c.relative_stationarity <= options.tol_stationarity &&
                c.complementarity_residual <= options.tol_complementarity &&
                p - pv.phi <= options.tol_feasibility;
  return c;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AlPoint {
  bool ok = false;
  double psi = kInf;
  Eigen::VectorXd grad;
  double phi = 0.0;
  double phit = kInf;
  Eigen::VectorXd sub;
  bool multi = false;
};

// Psi(u) = F(u) + (max(0, mu + c phi_tilde(u))^2 - mu^2) / (2c)
struct AugmentedLagrangian {
  const ChanceModel& model;
  const Objective& objective;
  double p;
  double mu;
  double c;

  AlPoint eval(const Eigen::VectorXd& u) const {
    AlPoint a;
    ProbabilityValue pv;
    try {
      pv = model.evaluate(u);
    } catch (const SlaterViolation&) {
      return a;
    }
    if (!(pv.phi > 0.0)) return a;
    a.ok = true;
    a.phi = pv.phi;
    a.phit = phi_tilde(pv.phi, p);
    a.sub = std::move(pv.subgradient);
    a.multi = pv.multi_active;
    const double shifted = std::max(0.0, mu + c * a.phit);
    a.psi = objective.value(u) + (shifted * shifted - mu * mu) / (2.0 * c);
    a.grad = objective.gradient(u) - (shifted / a.phi) * a.sub;
    return a;
  }
};

// L-BFGS on Psi with Armijo backtracking.  Psi is only piecewise smooth when
// active sets switch; a failed line search restarts from steepest descent and
// a second failure ends the inner loop.
int minimize_inner(const AugmentedLagrangian& al, Eigen::VectorXd& u, AlPoint& cur, double tol,
                   int max_iter) {
  const ChanceModel& model = al.model;
  constexpr std::size_t kMemory = 8;
  std::deque<Eigen::VectorXd> s_hist;
  std::deque<Eigen::VectorXd> y_hist;
  std::deque<double> rho_hist;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double gnorm = model.norm(cur.grad);
    if (gnorm <= tol) break;

    bool restarted = false;
    for (;;) {
      Eigen::VectorXd q = cur.grad;
      std::vector<double> a(s_hist.size());
      for (std::size_t k = s_hist.size(); k-- > 0;) {
        a[k] = rho_hist[k] * model.inner(s_hist[k], q);
        q -= a[k] * y_hist[k];
      }
      double gamma = 1.0 / std::max(1.0, gnorm);
      if (!s_hist.empty())
        gamma = model.inner(s_hist.back(), y_hist.back()) / model.inner(y_hist.back(), y_hist.back());
      Eigen::VectorXd d = gamma * q;
      for (std::size_t k = 0; k < s_hist.size(); ++k) {
        const double b = rho_hist[k] * model.inner(y_hist[k], d);
        d += (a[k] - b) * s_hist[k];
      }
      d = -d;
      double slope = model.inner(cur.grad, d);
      if (!(slope < 0.0)) {
        d = -gamma * cur.grad;
        slope = -gamma * gnorm * gnorm;
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
      }

      double t = 1.0;
      bool accepted = false;
      Eigen::VectorXd u_new;
      AlPoint next;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        u_new = u + t * d;
        next = al.eval(u_new);
        if (!next.ok) continue;
        if (next.psi <= cur.psi + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
        // Round-off regime: Psi no longer resolves the decrease.
        if (next.psi <= cur.psi + 1e-14 * std::max(1.0, std::abs(cur.psi)) &&
            model.norm(next.grad) < gnorm) {
          accepted = true;
          break;
        }
      }
      if (accepted) {
        Eigen::VectorXd sk = u_new - u;
        Eigen::VectorXd yk = next.grad - cur.grad;
        const double sy = model.inner(sk, yk);
        if (sy > 1e-14 * model.norm(sk) * model.norm(yk) && sy > 0.0) {
          if (s_hist.size() == kMemory) {
            s_hist.pop_front();
            y_hist.pop_front();
            rho_hist.pop_front();
          }
          s_hist.push_back(std::move(sk));
          y_hist.push_back(std::move(yk));
          rho_hist.push_back(1.0 / sy);
        }
        u = std::move(u_new);
        cur = std::move(next);
        break;
      }
      if (restarted || s_hist.empty()) return it;
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      restarted = true;
    }
  }
  return it;
}

double merit(const KktCertificate& c) {
  return c.relative_stationarity + c.complementarity_residual + std::max(0.0, c.p - c.phi_value);
}

}  // namespace

SolveResult solve(const ChanceModel& model, const Objective& objective, double p,
                  const Eigen::VectorXd& u0, const SolverOptions& options,
                  const ProgressCallback& progress) {
  options.validate();
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("probability level p must lie in (0,1)");
  if (u0.size() != model.dimension()) throw InvalidArgument("initial control has the wrong length");

  SolveResult result;

  // Inactive branch: the unconstrained minimizer is feasible.
  if (auto umin = objective.unconstrained_minimizer()) {
    try {
      const ProbabilityValue pv = model.evaluate(*umin);
      if (pv.phi >= p) {
        result.certificate = kkt_residual(model, objective, p, *umin, 0.0, options);
        result.certificate.message = "constraint inactive at the unconstrained minimizer";
        return result;
      }
    } catch (const SlaterViolation&) {
    }
  }

  ProbabilityValue start;
  try {
    start = model.evaluate(u0);
  } catch (const SlaterViolation& e) {
    throw SolverFailure(std::string("initial control rejected: ") + e.what());
  }

  // Generalized Slater probe: some control with phi > p.
  bool slater = start.phi > p;
  const double gnorm0 = model.norm(start.subgradient);
  if (!slater && gnorm0 > 0.0) {
    const double scale = (1.0 + model.norm(u0)) / gnorm0;
    for (double t = 1e-4; t <= 1e4 && !slater; t *= 2.0) {
      try {
        slater = model.evaluate(u0 + t * scale * start.subgradient).phi > p;
      } catch (const SlaterViolation&) {
      }
    }
  }
  if (!slater) throw SolverFailure("no strictly feasible control (phi > p) found by probing");

  Eigen::VectorXd u = u0;
  AugmentedLagrangian al{model, objective, p, options.initial_multiplier * std::max(start.phi, 1e-300),
                         options.penalty_initial};
  AlPoint cur = al.eval(u);
  if (!cur.ok) throw SolverFailure("phi vanishes at the initial control");

  double prev_violation = kInf;
  KktCertificate best;
  double best_merit = kInf;
  for (int outer = 1; outer <= options.max_outer; ++outer) {
    const double gref = std::max(model.norm(objective.gradient(u)), 1e-12);
    const int inner = minimize_inner(al, u, cur, 0.25 * options.tol_stationarity * gref, options.max_inner);

    const double shifted = std::max(0.0, al.mu + al.c * cur.phit);
    const double violation = std::abs(std::max(cur.phit, -al.mu / al.c));
    al.mu = shifted;
    const double lambda = shifted / cur.phi;

    KktCertificate cert = kkt_residual(model, objective, p, u, lambda, options);
    cert.outer_iterations = outer;

    IterationRecord rec;
    rec.outer = outer;
    rec.inner_iterations = inner;
    rec.u_norm = model.norm(u);
    rec.phi = cert.phi_value;
    rec.phi_tilde = phi_tilde(cert.phi_value, p);
    rec.lambda = lambda;
    rec.penalty = al.c;
    rec.stationarity = cert.stationarity_residual;
    rec.complementarity = cert.complementarity_residual;
    result.log.push_back(rec);
    if (progress) progress(rec);

    if (merit(cert) < best_merit || cert.converged) {
      best_merit = merit(cert);
      best = cert;
    }
    if (cert.converged) break;

    if (violation > 0.25 * prev_violation) al.c = std::min(al.c * options.penalty_growth, 1e12);
    prev_violation = violation;
    cur = al.eval(u);  // Psi changed with (mu, c)
    if (!cur.ok) break;
  }

  // The multiplier fitted to the final gradients can only lower the residual.
  if (best.active) {
    const ProbabilityValue pv = model.evaluate(best.u_star);
    const double gg = model.inner(pv.subgradient, pv.subgradient);
    if (gg > 0.0) {
      const double fitted =
          std::max(0.0, model.inner(objective.gradient(best.u_star), pv.subgradient) / gg);
      KktCertificate alt = kkt_residual(model, objective, p, best.u_star, fitted, options);
      if (alt.stationarity_residual < best.stationarity_residual &&
          alt.complementarity_residual <= std::max(best.complementarity_residual, options.tol_complementarity)) {
        alt.outer_iterations = best.outer_iterations;
        best = alt;
      }
    }
  }
  best.message = best.converged ? "converged" : "iteration cap reached; best iterate reported";
  result.certificate = std::move(best);
  return result;
}

SolveResult solve(const Problem& problem, const SolverOptions& options, std::optional<ControlField> u0,
                  const ProgressCallback& progress) {
  options.validate();
  SrdOptions srd;
  srd.selection = options.selection;
  SrdChanceModel model(problem, sample_sphere(static_cast<int>(problem.m()), options.directions, options.seed),
                       srd);
  const QuadraticObjective objective = QuadraticObjective::from(problem);
  const ControlField start = u0 ? *u0 : ControlField::zero(problem.grid());
  problem.check_control(start);
  return solve(model, objective, problem.p(), start.values, options, progress);
}

KktCertificate kkt_residual(const Problem& problem, const DirectionSet& dirs, const ControlField& u,
                            double lambda, const SolverOptions& options) {
  problem.check_control(u);
  SrdOptions srd;
  srd.selection = options.selection;
  SrdChanceModel model(problem, dirs, srd);
  return kkt_residual(model, QuadraticObjective::from(problem), problem.p(), u.values, lambda, options);
}

std::vector<SweepRow> multiplier_blowup_sweep(std::span<const double> p_list, const SolverOptions& options) {
  const ScalarDensityModel model;
  const LinearObjective objective(Eigen::VectorXd::Constant(1, 1.0));
  std::vector<SweepRow> rows;
  rows.reserve(p_list.size());
  for (double p : p_list) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("sweep levels must lie in (0,1)");
    const SolveResult r = solve(model, objective, p, Eigen::VectorXd::Constant(1, 1.0), options);
    rows.push_back({p, r.certificate.u_star[0], r.certificate.lambda, r.certificate.objective_value,
                    r.certificate.converged});
  }
  return rows;
}

}  // namespace probust
