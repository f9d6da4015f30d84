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

#include "probust/problem.hpp"

#include <cmath>
#include <sstream>

#include "probust/errors.hpp"

namespace probust {

namespace {
void check_interior(const Grid& g, const Eigen::VectorXd& v, const char* name) {
  if (static_cast<std::size_t>(v.size()) != g.num_interior()) {
    std::ostringstream os;
    os << name << " has " << v.size() << " values, expected " << g.num_interior()
       << " (one per interior node)";
    throw InvalidArgument(os.str());
  }
  if (!v.allFinite()) throw InvalidArgument(std::string(name) + " contains non-finite values");
}
}  // namespace

Problem::Problem(ProblemData data, LinearSolverKind kind)
    : data_(std::move(data)),
      factor_(cholesky_sqrt(data_.sigma)),
      chi_(static_cast<int>(data_.sigma.rows())) {
  const Grid& g = data_.grid;
  if (data_.phi.empty()) throw InvalidArgument("problem needs at least one basis field (m >= 1)");
  if (static_cast<std::size_t>(data_.sigma.rows()) != data_.phi.size())
    throw InvalidArgument("covariance dimension does not match the number of basis fields");
  if (!(data_.p > 0.0 && data_.p < 1.0)) throw InvalidArgument("probability level p must lie in (0,1)");
  if (!std::isfinite(data_.alpha)) throw InvalidArgument("threshold alpha must be finite");
  if (data_.f0.size() == 0) data_.f0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_interior()));
  check_interior(g, data_.f0, "f0");
  for (const auto& phi : data_.phi) check_interior(g, phi, "basis field");

  op_ = assemble_laplacian(g, kind);
  y0_ = g.embed(op_->solve(data_.f0));
  basis_.reserve(data_.phi.size());
  for (const auto& phi : data_.phi) basis_.push_back(g.embed(op_->solve(phi)));

  switch (data_.objective.kind) {
    case ObjectiveSpec::Kind::tikhonov:
      target_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_interior()));
      break;
    case ObjectiveSpec::Kind::tracking:
      check_interior(g, data_.objective.target, "tracking target");
      target_ = data_.objective.target;
      break;
    case ObjectiveSpec::Kind::affine_tracking:
      target_ = probust::representer(*op_, data_.objective.node).values;
      break;
  }
}

void Problem::check_control(const ControlField& u) const {
  if (!(u.grid == grid())) throw InvalidArgument("control field lives on a different grid");
  check_interior(grid(), u.values, "control");
}

Eigen::VectorXd Problem::combine_basis(const Eigen::VectorXd& c) const {
  if (static_cast<std::size_t>(c.size()) != m())
    throw InvalidArgument("parameter vector length does not match m");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid().num_nodes()));
  for (std::size_t i = 0; i < m(); ++i)
    if (c[static_cast<Eigen::Index>(i)] != 0.0) out += c[static_cast<Eigen::Index>(i)] * basis_[i];
  return out;
}

Eigen::VectorXd Problem::control_state(const ControlField& u) const {
  check_control(u);
  return grid().embed(op_->solve(u.values));
}

StateField Problem::apply_p(const ControlField& u, const Eigen::VectorXd& z) const {
  if (!z.allFinite()) throw InvalidArgument("parameter vector is not finite");
  return {grid(), control_state(u) + combine_basis(z)};
}

StateField Problem::solve_state(const ControlField& u, const Eigen::VectorXd& z) const {
  StateField y = apply_p(u, z);
  y.values += y0_;
  return y;
}

ControlField Problem::representer(NodeIndex node) const { return probust::representer(*op_, node); }

double state_bound_constant(const Problem& problem) {
  const Grid& g = problem.grid();
  double c_control = 0.0;
  for (std::size_t k = 0; k < g.num_interior(); ++k)
    c_control = std::max(c_control, problem.representer(g.interior_node(k)).norm());
  double c_param = 0.0;
  for (NodeIndex n = 0; n < g.num_nodes(); ++n) {
    double s = 0.0;
    for (const auto& w : problem.basis_states()) s += w[static_cast<Eigen::Index>(n)] * w[static_cast<Eigen::Index>(n)];
    c_param = std::max(c_param, std::sqrt(s));
  }
  return std::max(c_control, c_param);
}

}  // namespace probust
