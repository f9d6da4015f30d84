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

#include "probust/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "probust/cases.hpp"
#include "probust/fields.hpp"
#include "probust/gaussian.hpp"

namespace probust {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out = "invalid configuration:";
  for (const auto& l : lines) out += "\n  " + l;
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::vector<std::string>& errors)
      : entries_(std::move(entries)), errors_(errors) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    used_.push_back(key);
    return &it->second;
  }

  void error(const Entry* e, const std::string& key, const std::string& msg) {
    std::ostringstream s;
    if (e) s << "line " << e->line << ": ";
    s << key << ": " << msg;
    errors_.push_back(s.str());
  }

  template <class T, class F>
  void read(const std::string& key, T& out, F parse) {
    const Entry* e = take(key);
    if (!e) return;
    try {
      out = parse(e->value);
    } catch (const std::exception& ex) {
      error(e, key, ex.what());
    }
  }

  void require(const std::string& key) {
    if (!has(key)) error(nullptr, key, "missing mandatory key");
  }

  void reject_unused() {
    for (const auto& [key, entry] : entries_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end())
        error(&entry, key, "unknown key");
    }
  }

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [key, entry] : entries_)
      if (key.rfind(prefix, 0) == 0) out.push_back(key);
    return out;
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<std::string> used_;
  std::vector<std::string>& errors_;
};

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InvalidArgument("'" + s + "' is not a number");
  if (std::isnan(v)) throw InvalidArgument("NaN is not allowed");
  return v;
}

long long to_integer(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw InvalidArgument("'" + s + "' is not an integer");
  return static_cast<long long>(v);
}

std::size_t to_count(const std::string& s) {
  const long long v = to_integer(s);
  if (v < 0) throw InvalidArgument("must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw InvalidArgument("'" + s + "' is not a boolean");
}

std::vector<double> to_list(const std::string& s) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(tok));
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

Eigen::VectorXd to_vector(const std::string& s) {
  const std::vector<double> v = to_list(s);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd to_matrix(const std::string& s) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(s);
  std::string row;
  while (std::getline(in, row, ';')) rows.push_back(to_list(row));
  if (rows.empty()) throw InvalidArgument("empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw InvalidArgument("matrix rows differ in length");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string to_field(const std::string& s) {
  check_field_expression(s);
  return s;
}

}  // namespace

ParametricSource parse_parametric_source(const std::string& s) {
  if (s.rfind("jump:", 0) != 0) throw InvalidArgument("unknown parametric source '" + s + "'");
  std::vector<double> v;
  std::istringstream in(s.substr(5));
  std::string tok;
  while (std::getline(in, tok, ':')) v.push_back(to_double(tok));
  if (v.size() != 3) throw InvalidArgument("jump source needs z0:value:value_at_z0");
  return cases::jump_source(v[0], v[1], v[2]);
}

namespace {

std::map<std::string, Entry> tokenize(const std::string& text, std::vector<std::string>& errors) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line) + ": expected 'key = value', got '" + body + "'");
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errors.push_back("line " + std::to_string(line) + ": empty key or value");
      continue;
    }
    if (out.count(key)) {
      errors.push_back("line " + std::to_string(line) + ": " + key + ": duplicate key (first set on line " +
                       std::to_string(out[key].line) + ")");
      continue;
    }
    out[key] = {value, line};
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : InvalidArgument(join(errors)), errors_(std::move(errors)) {}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read configuration file " + path.string()});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin) {
  std::vector<std::string> errors;
  Reader r(tokenize(text, errors), errors);
  RunConfig cfg;
  cfg.path = origin;
  ProblemConfig& pc = cfg.problem;

  r.read("problem.kind", pc.kind, [](const std::string& s) {
    if (s == "pde") return ProblemConfig::Kind::pde;
    if (s == "scalar_density") return ProblemConfig::Kind::scalar_density;
    throw InvalidArgument("expected pde or scalar_density");
  });

  if (pc.kind == ProblemConfig::Kind::pde) {
    r.require("grid.nx");
    r.require("problem.alpha");
    r.require("problem.phi.1");
  }
  r.read("grid.nx", pc.nx, to_count);
  r.read("grid.ny", pc.ny, to_count);
  if (pc.ny == 0) pc.ny = pc.nx;
  r.read("problem.domain", pc.domain, [](const std::string& s) {
    const std::vector<double> v = to_list(s);
    if (v.size() != 2 && v.size() != 4) throw InvalidArgument("expected 'x0 x1' or 'x0 x1 y0 y1'");
    Rectangle d{v[0], v[1], 0.0, 1.0};
    if (v.size() == 4) {
      d.y0 = v[2];
      d.y1 = v[3];
    }
    if (!(d.x0 < d.x1 && d.y0 < d.y1)) throw InvalidArgument("domain bounds must be increasing");
    return d;
  });
  r.read("problem.f0", pc.f0, to_field);
  r.read("problem.alpha", pc.alpha, to_double);

  std::size_t m = 0;
  for (const std::string& key : r.keys_with_prefix("problem.phi.")) {
    const std::string idx = key.substr(12);
    long long k = 0;
    try {
      k = to_integer(idx);
    } catch (const std::exception&) {
      k = 0;
    }
    if (k < 1) {
      r.error(r.take(key), key, "basis index must be a positive integer");
      continue;
    }
    m = std::max(m, static_cast<std::size_t>(k));
  }
  pc.phi.assign(m, "");
  for (std::size_t k = 1; k <= m; ++k) {
    const std::string key = "problem.phi." + std::to_string(k);
    if (!r.has(key)) {
      r.error(nullptr, key, "missing (basis fields must be numbered 1..m without gaps)");
      continue;
    }
    r.read(key, pc.phi[k - 1], to_field);
  }

  r.read("problem.sigma", pc.sigma, to_matrix);
  if (pc.sigma.size() > 0 && m > 0) {
    if (pc.sigma.rows() != static_cast<Eigen::Index>(m) || pc.sigma.cols() != static_cast<Eigen::Index>(m)) {
      r.error(nullptr, "problem.sigma", "must be " + std::to_string(m) + " x " + std::to_string(m));
    } else {
      try {
        (void)cholesky_sqrt(pc.sigma);
      } catch (const std::exception& e) {
        r.error(nullptr, "problem.sigma", e.what());
      }
    }
  }

  const Entry* pe = r.take("problem.p");
  if (pe) {
    try {
      const double p = to_double(pe->value);
      if (p >= 1.0) {
        r.error(pe, "problem.p",
                "p = " + pe->value +
                    " is not allowed: the probabilistic model requires p < 1 (at p = 1 the constraint "
                    "qualification fails); use the 'robust' subcommand for constraints that must hold "
                    "for every parameter or almost surely");
      } else if (!(p > 0.0)) {
        r.error(pe, "problem.p", "must lie in (0,1)");
      } else {
        pc.p = p;
      }
    } catch (const std::exception& e) {
      r.error(pe, "problem.p", e.what());
    }
  }

  r.read("objective.kind", pc.objective, [](const std::string& s) {
    if (s == "tikhonov") return ObjectiveSpec::Kind::tikhonov;
    if (s == "tracking") return ObjectiveSpec::Kind::tracking;
    if (s == "affine_tracking") return ObjectiveSpec::Kind::affine_tracking;
    throw InvalidArgument("expected tikhonov, tracking or affine_tracking");
  });
  r.read("objective.target", pc.objective_target, to_field);
  const Entry* node = r.take("objective.node");
  if (node) {
    try {
      const std::vector<double> v = to_list(node->value);
      if (v.empty() || v.size() > 2) throw InvalidArgument("expected 'x' or 'x y'");
      pc.node_x = v[0];
      pc.node_y = v.size() == 2 ? v[1] : 0.0;
    } catch (const std::exception& e) {
      r.error(node, "objective.node", e.what());
    }
  }
  r.read("solver.linear_solver", pc.linear_solver, [](const std::string& s) {
    if (s == "automatic") return LinearSolverKind::automatic;
    if (s == "cholesky") return LinearSolverKind::cholesky;
    if (s == "pcg") return LinearSolverKind::pcg;
    throw InvalidArgument("expected automatic, cholesky or pcg");
  });

  r.read("control.u", cfg.control, to_field);
  r.read("grad.direction", cfg.grad_direction, to_field);
  r.read("grad.fd_step", cfg.fd_step, [](const std::string& s) {
    const double v = to_double(s);
    if (!(v > 0.0)) throw InvalidArgument("must be positive");
    return v;
  });

  r.read("srd.directions", cfg.solver.directions, [](const std::string& s) {
    const std::size_t n = to_count(s);
    if (n == 0) throw InvalidArgument("must be positive");
    return n;
  });
  r.read("srd.seed", cfg.solver.seed, [](const std::string& s) { return static_cast<std::uint64_t>(to_count(s)); });
  r.read("srd.selection", cfg.srd.selection, [](const std::string& s) {
    if (s == "average") return Selection::average;
    if (s == "first") return Selection::first;
    throw InvalidArgument("expected average or first");
  });
  cfg.solver.selection = cfg.srd.selection;
  r.read("srd.tol_active", cfg.srd.tol_active, to_double);

  SolverOptions& so = cfg.solver;
  auto as_int = [](const std::string& s) { return static_cast<int>(to_integer(s)); };
  r.read("solver.max_outer", so.max_outer, as_int);
  r.read("solver.max_inner", so.max_inner, as_int);
  r.read("solver.tol_stationarity", so.tol_stationarity, to_double);
  r.read("solver.tol_complementarity", so.tol_complementarity, to_double);
  r.read("solver.tol_feasibility", so.tol_feasibility, to_double);
  r.read("solver.penalty_initial", so.penalty_initial, to_double);
  r.read("solver.penalty_growth", so.penalty_growth, to_double);
  r.read("solver.initial_multiplier", so.initial_multiplier, to_double);
  try {
    so.validate();
  } catch (const std::exception& e) {
    r.error(nullptr, "solver", e.what());
  }

  RobustConfig& rc = cfg.robust;
  std::string rkind = "box";
  r.read("robust.kind", rkind, [](const std::string& s) {
    if (s != "box" && s != "ellipsoid") throw InvalidArgument("expected box or ellipsoid");
    return s;
  });
  rc.present = !r.keys_with_prefix("robust.").empty();
  Eigen::VectorXd lower, upper, center;
  Eigen::MatrixXd shape;
  double radius = 1.0;
  std::vector<int> resolution;
  r.read("robust.lower", lower, to_vector);
  r.read("robust.upper", upper, to_vector);
  r.read("robust.center", center, to_vector);
  r.read("robust.shape", shape, to_matrix);
  r.read("robust.radius", radius, to_double);
  r.read("robust.resolution", resolution, [](const std::string& s) {
    std::vector<int> out;
    for (double v : to_list(s)) {
      if (v != std::floor(v) || v < 1) throw InvalidArgument("resolution entries must be positive integers");
      out.push_back(static_cast<int>(v));
    }
    return out;
  });
  r.read("robust.source", rc.source, [](const std::string& s) {
    if (s != "affine") (void)parse_parametric_source(s);
    return s;
  });
  r.read("robust.scenarios", rc.scenarios, to_count);
  r.read("robust.scenario_seed", rc.scenario_seed,
         [](const std::string& s) { return static_cast<std::uint64_t>(to_count(s)); });
  r.read("robust.scenario_law", rc.scenario_law, [](const std::string& s) {
    if (s != "uniform" && s != "gaussian") throw InvalidArgument("expected uniform or gaussian");
    return s;
  });
  r.read("robust.tol_feasibility", rc.sip.tol_feasibility, to_double);
  r.read("robust.tol_active", rc.sip.tol_active, to_double);
  r.read("robust.max_exchange", rc.sip.max_exchange, as_int);
  if (rc.present) {
    try {
      if (rkind == "box") {
        if (lower.size() == 0 || upper.size() == 0) throw InvalidArgument("box needs robust.lower and robust.upper");
        rc.set = UncertaintySet::box(lower, upper, resolution);
      } else {
        if (center.size() == 0) throw InvalidArgument("ellipsoid needs robust.center");
        if (shape.size() == 0) shape = Eigen::MatrixXd::Identity(center.size(), center.size());
        rc.set = UncertaintySet::ellipsoid(center, shape, radius, resolution);
      }
      if (rc.scenario_law == "uniform" && rc.set.kind != UncertaintySet::Kind::box)
        throw InvalidArgument("uniform scenarios need a box set");
    } catch (const std::exception& e) {
      r.error(nullptr, "robust", e.what());
    }
  }

  const Entry* sweep = r.take("sweep.p");
  if (sweep) {
    try {
      cfg.sweep_p = to_list(sweep->value);
      for (double p : cfg.sweep_p)
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("sweep levels must lie in (0,1)");
    } catch (const std::exception& e) {
      r.error(sweep, "sweep.p", e.what());
    }
  }

  r.read("case.id", cfg.case_id, [](const std::string& s) -> std::optional<CaseId> {
    const auto id = parse_case(s);
    if (!id) throw InvalidArgument("unknown case '" + s + "'");
    return id;
  });
  r.read("output.dir", cfg.output_dir, [](const std::string& s) { return std::filesystem::path(s); });
  r.read("output.csv", cfg.csv, to_bool);

  if (pc.kind == ProblemConfig::Kind::pde && pc.nx > 0) {
    try {
      (void)Grid(pc.nx, pc.ny, pc.domain);
    } catch (const std::exception& e) {
      r.error(nullptr, "grid", e.what());
    }
  }
  r.reject_unused();
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return cfg;
}

double require_p(const RunConfig& cfg) {
  if (!cfg.problem.p) throw ConfigError({"problem.p: missing (needed by this subcommand)"});
  return *cfg.problem.p;
}

Grid build_grid(const RunConfig& cfg) { return Grid(cfg.problem.nx, cfg.problem.ny, cfg.problem.domain); }

Problem build_problem(const RunConfig& cfg) {
  const ProblemConfig& pc = cfg.problem;
  if (pc.kind != ProblemConfig::Kind::pde) throw InvalidArgument("configuration does not describe a PDE problem");
  ProblemData d;
  d.grid = build_grid(cfg);
  d.f0 = evaluate_field(pc.f0, d.grid);
  for (const std::string& e : pc.phi) d.phi.push_back(evaluate_field(e, d.grid));
  d.alpha = pc.alpha;
  const auto m = static_cast<Eigen::Index>(pc.phi.size());
  d.sigma = pc.sigma.size() > 0 ? pc.sigma : Eigen::MatrixXd::Identity(m, m);
  d.p = pc.p.value_or(0.5);
  switch (pc.objective) {
    case ObjectiveSpec::Kind::tikhonov:
      d.objective = ObjectiveSpec::tikhonov();
      break;
    case ObjectiveSpec::Kind::tracking:
      d.objective = ObjectiveSpec::tracking(evaluate_field(pc.objective_target, d.grid));
      break;
    case ObjectiveSpec::Kind::affine_tracking:
      d.objective = ObjectiveSpec::affine_tracking(cases::require_node(d.grid, pc.node_x, pc.node_y));
      break;
  }
  return Problem(std::move(d), pc.linear_solver);
}

std::filesystem::path output_directory(const RunConfig& cfg) {
  if (const char* env = std::getenv("PROBUST_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

}  // namespace probust
