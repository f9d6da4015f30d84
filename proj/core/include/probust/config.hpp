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

// Run configuration: a flat "section.key = value" text file, one assignment
// per line, '#' starts a comment.  See docs/config.md for every key.

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "probust/analytic_cases.hpp"
#include "probust/chance_opt.hpp"
#include "probust/errors.hpp"
#include "probust/grid_pde.hpp"
#include "probust/problem.hpp"
#include "probust/robust_as.hpp"
#include "probust/srd_prob.hpp"

namespace probust {

/// Every problem found in a configuration, with line numbers where known.
class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct ProblemConfig {
  enum class Kind { pde, scalar_density };

  Kind kind = Kind::pde;
  std::size_t nx = 0;
  std::size_t ny = 0;  ///< 1 selects a line grid; defaults to nx
  Rectangle domain;
  std::string f0 = "zero";
  std::vector<std::string> phi;
  double alpha = 0.0;
  Eigen::MatrixXd sigma;  ///< empty means identity
  std::optional<double> p;
  ObjectiveSpec::Kind objective = ObjectiveSpec::Kind::tikhonov;
  std::string objective_target = "zero";
  double node_x = 0.5;
  double node_y = 0.5;
  LinearSolverKind linear_solver = LinearSolverKind::automatic;
};

struct RobustConfig {
  bool present = false;
  UncertaintySet set;
  /// "affine" or "jump:<z0>:<value>:<value at z0>".
  std::string source = "affine";
  std::size_t scenarios = 10000;
  std::uint64_t scenario_seed = 7;
  /// "uniform" (on the box) or "gaussian" (covariance sigma).
  std::string scenario_law = "uniform";
  SipOptions sip;
};

struct RunConfig {
  std::filesystem::path path;
  ProblemConfig problem;
  SrdOptions srd;
  SolverOptions solver;
  /// Control at which evaluate/grad work, and the solver start.
  std::string control = "zero";
  std::string grad_direction = "gaussian_bump";
  double fd_step = 1e-6;
  RobustConfig robust;
  std::vector<double> sweep_p;
  std::optional<CaseId> case_id;
  std::filesystem::path output_dir = "out";
  bool csv = true;
};

/// Parses and validates; throws ConfigError listing all problems.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& origin = "<string>");

/// The probability level, or ConfigError when absent.
double require_p(const RunConfig& cfg);

Grid build_grid(const RunConfig& cfg);
/// Problem of a `pde` configuration; `p` defaults to 0.5 when not given.
Problem build_problem(const RunConfig& cfg);

/// "jump:<z0>:<value>:<value at z0>" as a parametric source.
ParametricSource parse_parametric_source(const std::string& spec);

/// output.dir unless PROBUST_OUTPUT_DIR is set.
std::filesystem::path output_directory(const RunConfig& cfg);

}  // namespace probust
