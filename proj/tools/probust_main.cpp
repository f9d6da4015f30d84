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

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "probust/analytic_cases.hpp"
#include "probust/cases.hpp"
#include "probust/chance_opt.hpp"
#include "probust/config.hpp"
#include "probust/errors.hpp"
#include "probust/fields.hpp"
#include "probust/io.hpp"
#include "probust/robust_as.hpp"
#include "probust/srd_prob.hpp"
#include "probust/verify.hpp"

namespace {

using namespace probust;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

std::string fmt(double v) { return format_double(v); }

void emit(const RunConfig& cfg, const std::string& name, const CsvWriter& csv) {
  if (!cfg.csv) return;
  const auto path = output_directory(cfg) / name;
  atomic_write(path, csv.str());
  std::cout << "wrote " << path.string() << "\n";
}

void progress_line(const IterationRecord& r) {
  std::fprintf(stderr,
               "progress iter=%d inner=%d phi=%.10g phi_tilde=%.3e lambda=%.10g penalty=%.3g "
               "stationarity=%.3e complementarity=%.3e\n",
               r.outer, r.inner_iterations, r.phi, r.phi_tilde, r.lambda, r.penalty, r.stationarity,
               r.complementarity);
}

double scalar_control(const RunConfig& cfg) {
  return evaluate_field(cfg.control, Grid::line(3, 0.0, 1.0))[0];
}

DirectionSet directions_for(const RunConfig& cfg, const Problem& problem) {
  return sample_sphere(static_cast<int>(problem.m()), cfg.solver.directions, cfg.solver.seed);
}

std::vector<std::string> node_columns(const Grid& g, NodeIndex n) {
  const auto c = g.coords(n);
  return {std::to_string(n), fmt(c[0]), fmt(c[1])};
}

int run_evaluate(const RunConfig& cfg) {
  if (cfg.problem.kind == ProblemConfig::Kind::scalar_density) {
    const double u = scalar_control(cfg);
    const ProbabilityValue v = ScalarDensityModel{}.evaluate(Eigen::VectorXd::Constant(1, u));
    std::cout << "phi = " << fmt(v.phi) << "\n";
    return kExitOk;
  }
  const Problem problem = build_problem(cfg);
  const ControlField u{problem.grid(), evaluate_field(cfg.control, problem.grid())};
  const DirectionSet dirs = directions_for(cfg, problem);
  const ProbabilityEvaluation ev = evaluate_probability(problem, u, dirs, cfg.srd);
  std::cout << "phi = " << fmt(ev.value) << "\n";
  std::cout << "directions = " << dirs.size() << "\n";

  std::vector<std::string> header{"index"};
  for (std::size_t i = 0; i < problem.m(); ++i) header.push_back("v" + std::to_string(i + 1));
  for (const char* h : {"weight", "rho", "e", "active_nodes"}) header.emplace_back(h);
  CsvWriter csv(header);
  for (const DirectionReport& r : ev.directions) {
    std::vector<std::string> row{std::to_string(r.index)};
    for (Eigen::Index i = 0; i < r.v.size(); ++i) row.push_back(fmt(r.v[i]));
    row.push_back(fmt(dirs.weights[r.index]));
    row.push_back(fmt(r.rho));
    row.push_back(fmt(r.e));
    row.push_back(std::to_string(r.active_nodes.size()));
    csv.row(row);
  }
  emit(cfg, "evaluate.csv", csv);
  return kExitOk;
}

int run_grad(const RunConfig& cfg) {
  if (cfg.problem.kind == ProblemConfig::Kind::scalar_density) {
    const double u = scalar_control(cfg);
    const ScalarDensityModel model;
    const ProbabilityValue v = model.evaluate(Eigen::VectorXd::Constant(1, u));
    const double h = cfg.fd_step * std::max(std::abs(u), 1.0);
    const double fd = (model.evaluate(Eigen::VectorXd::Constant(1, u + h)).phi -
                       model.evaluate(Eigen::VectorXd::Constant(1, u - h)).phi) /
                      (2.0 * h);
    std::cout << "phi = " << fmt(v.phi) << "\nsubgradient = " << fmt(v.subgradient[0])
              << "\nfinite_difference = " << fmt(fd) << "\n";
    return kExitOk;
  }
  const Problem problem = build_problem(cfg);
  const Grid& g = problem.grid();
  const ControlField u{g, evaluate_field(cfg.control, g)};
  const DirectionSet dirs = directions_for(cfg, problem);
  const SubgradientField s = subgradient(problem, u, dirs, cfg.srd);

  const Eigen::VectorXd d = evaluate_field(cfg.grad_direction, g);
  const double dn = g.norm(d);
  double directional = 0.0;
  double fd = 0.0;
  double eps = 0.0;
  if (dn > 0.0) {
    eps = cfg.fd_step * std::max(u.norm(), 1.0) / dn;
    directional = g.inner(s.values.values, d);
    const double plus = probability(problem, ControlField{g, u.values + eps * d}, dirs, cfg.srd);
    const double minus = probability(problem, ControlField{g, u.values - eps * d}, dirs, cfg.srd);
    fd = (plus - minus) / (2.0 * eps);
  }
  const double rel = std::abs(directional - fd) / std::max(std::abs(fd), 1e-300);
  std::cout << "phi = " << fmt(s.phi) << "\n"
            << "subgradient_norm = " << fmt(s.values.norm()) << "\n"
            << "multi_active = " << (s.multi_active() ? "true" : "false") << "\n"
            << "directional_derivative = " << fmt(directional) << "\n"
            << "finite_difference = " << fmt(fd) << " (step " << fmt(eps) << ")\n"
            << "relative_difference = " << fmt(rel) << "\n";

  CsvWriter csv({"node", "x", "y", "subgradient"});
  for (std::size_t k = 0; k < g.num_interior(); ++k) {
    const NodeIndex n = g.interior_node(k);
    std::vector<std::string> row = node_columns(g, n);
    row.push_back(fmt(s.values.values[static_cast<Eigen::Index>(k)]));
    csv.row(row);
  }
  emit(cfg, "grad.csv", csv);
  return kExitOk;
}

void print_certificate(const KktCertificate& c) {
  std::cout << "status = " << c.message << "\n"
            << "converged = " << (c.converged ? "true" : "false") << "\n"
            << "lambda = " << fmt(c.lambda) << "\n"
            << "objective = " << fmt(c.objective_value) << "\n"
            << "phi = " << fmt(c.phi_value) << "\n"
            << "p = " << fmt(c.p) << "\n"
            << "active = " << (c.active ? "true" : "false") << "\n"
            << "multi_active = " << (c.multi_active ? "true" : "false") << "\n"
            << "stationarity_residual = " << fmt(c.stationarity_residual) << "\n"
            << "relative_stationarity = " << fmt(c.relative_stationarity) << "\n"
            << "complementarity_residual = " << fmt(c.complementarity_residual) << "\n"
            << "outer_iterations = " << c.outer_iterations << "\n";
}

CsvWriter iteration_csv(const std::vector<IterationRecord>& log) {
  CsvWriter csv({"outer", "inner", "u_norm", "phi", "phi_tilde", "lambda", "penalty", "stationarity",
                 "complementarity"});
  for (const IterationRecord& r : log)
    csv.row({std::to_string(r.outer), std::to_string(r.inner_iterations), fmt(r.u_norm), fmt(r.phi),
             fmt(r.phi_tilde), fmt(r.lambda), fmt(r.penalty), fmt(r.stationarity), fmt(r.complementarity)});
  return csv;
}

int run_solve(const RunConfig& cfg) {
  const double p = require_p(cfg);
  if (cfg.problem.kind == ProblemConfig::Kind::scalar_density) {
    const SolveResult r = solve(ScalarDensityModel{}, LinearObjective(Eigen::VectorXd::Ones(1)), p,
                                Eigen::VectorXd::Constant(1, cfg.control == "zero" ? 1.0 : scalar_control(cfg)),
                                cfg.solver, progress_line);
    std::cout << "u* = " << fmt(r.certificate.u_star[0]) << "\n";
    print_certificate(r.certificate);
    emit(cfg, "iterations.csv", iteration_csv(r.log));
    return r.certificate.converged ? kExitOk : kExitSolver;
  }
  const Problem problem = build_problem(cfg);
  const Grid& g = problem.grid();
  const SolveResult r =
      solve(problem, cfg.solver, ControlField{g, evaluate_field(cfg.control, g)}, progress_line);
  std::cout << "u*_norm = " << fmt(g.norm(r.certificate.u_star)) << "\n";
  print_certificate(r.certificate);
  emit(cfg, "iterations.csv", iteration_csv(r.log));
  CsvWriter csv({"node", "x", "y", "u"});
  for (std::size_t k = 0; k < g.num_interior(); ++k) {
    std::vector<std::string> row = node_columns(g, g.interior_node(k));
    row.push_back(fmt(r.certificate.u_star[static_cast<Eigen::Index>(k)]));
    csv.row(row);
  }
  emit(cfg, "control.csv", csv);
  return r.certificate.converged ? kExitOk : kExitSolver;
}

ScenarioSet scenarios_for(const RunConfig& cfg, std::size_t m) {
  const RobustConfig& rc = cfg.robust;
  if (rc.scenario_law == "gaussian") {
    const auto mm = static_cast<Eigen::Index>(m);
    const Eigen::MatrixXd sigma = cfg.problem.sigma.size() > 0 ? cfg.problem.sigma : Eigen::MatrixXd::Identity(mm, mm);
    return ScenarioSet::gaussian(cholesky_sqrt(sigma), rc.scenarios, rc.scenario_seed);
  }
  return ScenarioSet::uniform(rc.set.lower, rc.set.upper, rc.scenarios, rc.scenario_seed);
}

int run_robust(const RunConfig& cfg) {
  const RobustConfig& rc = cfg.robust;
  if (!rc.present) throw ConfigError({"robust: the robust subcommand needs a robust.* block"});
  if (cfg.problem.kind != ProblemConfig::Kind::pde) throw ConfigError({"robust: needs problem.kind = pde"});

  const Problem problem = build_problem(cfg);
  const Grid& g = problem.grid();
  const ControlField u{g, evaluate_field(cfg.control, g)};

  WorstCaseTable table;
  FeasibilityReport feas;
  if (rc.source == "affine") {
    table = worst_case(problem, rc.set);
    feas = as_feasibility(problem, u, scenarios_for(cfg, problem.m()));
  } else {
    const ParametricSource src = parse_parametric_source(rc.source);
    table = worst_case(problem.op(), src, rc.set);
    feas = as_feasibility(problem.op(), problem.alpha(), src, u, scenarios_for(cfg, src.dim));
  }
  const RobustConstraintValue rv = robust_constraint(problem.op(), problem.alpha(), table, u, rc.sip.tol_active);
  std::cout << "robust_constraint = " << fmt(rv.value) << "\n";
  for (const ActivePair& a : rv.argmax) {
    const auto c = g.coords(a.node);
    std::cout << "witness x = (" << fmt(c[0]) << ", " << fmt(c[1]) << ") z =";
    for (Eigen::Index i = 0; i < a.z.size(); ++i) std::cout << " " << fmt(a.z[i]);
    std::cout << " state = " << fmt(a.state) << "\n";
  }
  std::cout << "scenarios = " << rc.scenarios << "\n"
            << "scenario_violations = " << feas.violation_count << "\n"
            << "scenario_max_violation = " << fmt(feas.max_violation) << "\n";

  const SipResult r = sip_solve(problem.op(), problem.alpha(), problem.objective_target(), table, rc.sip);
  const NormalizedMeasure nm = normalize_measure(r.measure);
  std::cout << "sip_objective = " << fmt(r.objective_value) << "\n"
            << "sip_max_violation = " << fmt(r.max_violation) << "\n"
            << "sip_stationarity_residual = " << fmt(r.stationarity_residual) << "\n"
            << "sip_min_atom_slack = " << fmt(r.min_atom_slack) << "\n"
            << "sip_exchange_rounds = " << r.exchange_rounds << "\n"
            << "atoms = " << r.measure.atoms.size() << "\n"
            << "lambda_star = " << fmt(nm.lambda_star) << "\n";

  std::vector<std::string> header{"node", "x", "y"};
  for (std::size_t i = 0; i < rc.set.dim(); ++i) header.push_back("z" + std::to_string(i + 1));
  header.emplace_back("weight");
  header.emplace_back("normalized_weight");
  CsvWriter csv(header);
  for (std::size_t k = 0; k < r.measure.atoms.size(); ++k) {
    const Atom& a = r.measure.atoms[k];
    std::vector<std::string> row = node_columns(g, a.node);
    for (Eigen::Index i = 0; i < a.z.size(); ++i) row.push_back(fmt(a.z[i]));
    row.push_back(fmt(a.weight));
    row.push_back(fmt(nm.probability.atoms[k].weight));
    csv.row(row);
  }
  emit(cfg, "atoms.csv", csv);
  return kExitOk;
}

int run_verify(const std::vector<std::string>& paths) {
  std::vector<VerifyRow> rows;
  std::filesystem::path out_dir = "out";
  bool csv_on = true;
  if (paths.empty()) {
    rows = verify_all();
    if (const char* env = std::getenv("PROBUST_OUTPUT_DIR"); env && *env) out_dir = env;
  } else {
    for (const std::string& p : paths) {
      const RunConfig cfg = parse_config(p);
      if (!cfg.case_id) throw ConfigError({p + ": case.id is required for verify"});
      CaseSpec spec = default_case_spec(*cfg.case_id);
      if (cfg.problem.nx > 0) spec.grid_n = cfg.problem.nx;
      if (cfg.problem.p && *cfg.case_id == CaseId::scalar_density) spec.p = *cfg.problem.p;
      const std::vector<VerifyRow> part = verify_case(spec);
      rows.insert(rows.end(), part.begin(), part.end());
      out_dir = output_directory(cfg);
      csv_on = cfg.csv;
    }
  }
  bool all = true;
  CsvWriter csv({"case", "check", "measured", "expected", "tolerance", "result"});
  for (const VerifyRow& r : rows) {
    std::printf("%-15s %-42s measured=%-22.15g expected=%-22.15g tol=%-8g %s\n", r.case_id.c_str(),
                r.check.c_str(), r.measured, r.expected, r.tolerance, r.pass ? "PASS" : "FAIL");
    csv.row({r.case_id, r.check, fmt(r.measured), fmt(r.expected), fmt(r.tolerance), r.pass ? "PASS" : "FAIL"});
    all = all && r.pass;
  }
  std::fflush(stdout);
  if (csv_on) {
    atomic_write(out_dir / "verify.csv", csv.str());
    std::cout << "wrote " << (out_dir / "verify.csv").string() << "\n";
  }
  return all ? kExitOk : kExitSolver;
}

int run_sweep(const RunConfig& cfg) {
  std::vector<double> ps = cfg.sweep_p;
  if (ps.empty()) ps = {0.5, 0.75, 0.9, 0.99, 0.999, 0.9999};
  const std::vector<SweepRow> rows = multiplier_blowup_sweep(ps, cfg.solver);
  CsvWriter csv({"p", "u_star", "lambda", "objective", "converged"});
  for (const SweepRow& r : rows) {
    std::printf("p=%-10s u*=%-22s lambda=%-22s %s\n", fmt(r.p).c_str(), fmt(r.u_star).c_str(),
                fmt(r.lambda).c_str(), r.converged ? "converged" : "not converged");
    csv.row({fmt(r.p), fmt(r.u_star), fmt(r.lambda), fmt(r.objective), r.converged ? "true" : "false"});
  }
  std::fflush(stdout);
  emit(cfg, "sweep.csv", csv);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"probust: probabilistic, robust and almost-sure state constraints for a random Poisson model"};
  app.require_subcommand(1);
  std::string config;
  std::vector<std::string> verify_configs;

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "configuration file")->required()->check(CLI::ExistingFile);
    return sub;
  };
  CLI::App* evaluate = add("evaluate", "probability phi(u) and per-direction radii");
  CLI::App* grad = add("grad", "subgradient field and finite-difference check");
  CLI::App* solve_cmd = add("solve", "chance-constrained optimization with KKT certificate");
  CLI::App* robust = add("robust", "robust constraint, scenario feasibility and exchange-method solve");
  CLI::App* sweep = add("sweep", "multiplier blow-up sweep of the scalar model");
  CLI::App* verify = app.add_subcommand("verify", "replay the worked cases against closed forms");
  verify->add_option("configs", verify_configs, "case configurations (default: all cases)")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (verify->parsed()) return run_verify(verify_configs);
    const RunConfig cfg = parse_config(config);
    if (evaluate->parsed()) return run_evaluate(cfg);
    if (grad->parsed()) return run_grad(cfg);
    if (solve_cmd->parsed()) return run_solve(cfg);
    if (robust->parsed()) return run_robust(cfg);
    if (sweep->parsed()) return run_sweep(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SlaterViolation& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const CovarianceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInvalid;
}
