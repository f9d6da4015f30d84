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

#include "probust/grid_pde.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "probust/errors.hpp"

namespace probust {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}
}  // namespace

Grid::Grid(std::size_t nx, std::size_t ny, Rectangle domain)
    : nx_(nx), ny_(ny), domain_(domain), hx_(0.0), hy_(0.0) {
  if (nx < 3 || ny == 0 || ny == 2) {
    std::ostringstream os;
    os << "degenerate grid " << nx << "x" << ny
       << ": need nx >= 3 and either ny == 1 (line) or ny >= 3";
    throw InvalidArgument(os.str());
  }
  require(std::isfinite(domain.x0) && std::isfinite(domain.x1) && domain.x1 > domain.x0,
          "grid domain must satisfy x0 < x1");
  hx_ = (domain.x1 - domain.x0) / static_cast<double>(nx - 1);
  if (ny > 1) {
    require(std::isfinite(domain.y0) && std::isfinite(domain.y1) && domain.y1 > domain.y0,
            "grid domain must satisfy y0 < y1");
    hy_ = (domain.y1 - domain.y0) / static_cast<double>(ny - 1);
  }
}

Grid Grid::line(std::size_t nx, double a, double b) { return Grid(nx, 1, {a, b, 0.0, 0.0}); }

Grid Grid::square(std::size_t n, double a, double b) { return Grid(n, n, {a, b, a, b}); }

std::size_t Grid::num_interior() const noexcept {
  return dimension() == 1 ? nx_ - 2 : (nx_ - 2) * (ny_ - 2);
}

std::array<double, 2> Grid::coords(NodeIndex n) const noexcept {
  const double x = domain_.x0 + hx_ * static_cast<double>(i_of(n));
  const double y = dimension() == 1 ? domain_.y0 : domain_.y0 + hy_ * static_cast<double>(j_of(n));
  return {x, y};
}

bool Grid::is_interior(NodeIndex n) const noexcept {
  if (n >= num_nodes()) return false;
  const std::size_t i = i_of(n);
  if (i == 0 || i + 1 == nx_) return false;
  if (dimension() == 1) return true;
  const std::size_t j = j_of(n);
  return j != 0 && j + 1 != ny_;
}

std::size_t Grid::interior_index(NodeIndex n) const {
  if (!is_interior(n)) {
    std::ostringstream os;
    os << "node " << n << " is not an interior node";
    throw InvalidArgument(os.str());
  }
  if (dimension() == 1) return i_of(n) - 1;
  return (i_of(n) - 1) + (nx_ - 2) * (j_of(n) - 1);
}

NodeIndex Grid::interior_node(std::size_t k) const noexcept {
  if (dimension() == 1) return k + 1;
  const std::size_t w = nx_ - 2;
  return node(k % w + 1, k / w + 1);
}

std::optional<NodeIndex> Grid::find_node(double x, double y, double tol) const {
  const double fi = (x - domain_.x0) / hx_;
  const double ri = std::round(fi);
  if (ri < 0 || ri > static_cast<double>(nx_ - 1) || std::abs(fi - ri) * hx_ > tol) return std::nullopt;
  std::size_t j = 0;
  if (dimension() == 2) {
    const double fj = (y - domain_.y0) / hy_;
    const double rj = std::round(fj);
    if (rj < 0 || rj > static_cast<double>(ny_ - 1) || std::abs(fj - rj) * hy_ > tol)
      return std::nullopt;
    j = static_cast<std::size_t>(rj);
  }
  return node(static_cast<std::size_t>(ri), j);
}

Eigen::VectorXd Grid::sample_interior(const std::function<double(double, double)>& f) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(num_interior()));
  for (std::size_t k = 0; k < num_interior(); ++k) {
    const auto [x, y] = coords(interior_node(k));
    v[static_cast<Eigen::Index>(k)] = f(x, y);
  }
  return v;
}

Eigen::VectorXd Grid::sample_nodes(const std::function<double(double, double)>& f) const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(num_nodes()));
  for (NodeIndex n = 0; n < num_nodes(); ++n) {
    const auto [x, y] = coords(n);
    v[static_cast<Eigen::Index>(n)] = f(x, y);
  }
  return v;
}

Eigen::VectorXd Grid::embed(const Eigen::VectorXd& interior) const {
  if (static_cast<std::size_t>(interior.size()) != num_interior())
    throw InvalidArgument("embed: vector length does not match the interior node count");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_nodes()));
  for (std::size_t k = 0; k < num_interior(); ++k)
    full[static_cast<Eigen::Index>(interior_node(k))] = interior[static_cast<Eigen::Index>(k)];
  return full;
}

Eigen::VectorXd Grid::restrict(const Eigen::VectorXd& nodes) const {
  if (static_cast<std::size_t>(nodes.size()) != num_nodes())
    throw InvalidArgument("restrict: vector length does not match the node count");
  Eigen::VectorXd v(static_cast<Eigen::Index>(num_interior()));
  for (std::size_t k = 0; k < num_interior(); ++k)
    v[static_cast<Eigen::Index>(k)] = nodes[static_cast<Eigen::Index>(interior_node(k))];
  return v;
}

double Grid::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return cell_area() * a.dot(b);
}

double Grid::norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }

bool operator==(const Grid& a, const Grid& b) noexcept {
  return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.domain_.x0 == b.domain_.x0 &&
         a.domain_.x1 == b.domain_.x1 &&
         (a.ny_ == 1 || (a.domain_.y0 == b.domain_.y0 && a.domain_.y1 == b.domain_.y1));
}

ControlField ControlField::zero(const Grid& g) {
  return {g, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_interior()))};
}

ControlField ControlField::from(const Grid& g, Eigen::VectorXd v) {
  if (static_cast<std::size_t>(v.size()) != g.num_interior())
    throw InvalidArgument("control field length must equal the number of interior nodes");
  if (!v.allFinite()) throw InvalidArgument("control field contains non-finite values");
  return {g, std::move(v)};
}

// ---------------------------------------------------------------------------

struct PoissonOperator::Factorization {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> cholesky;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      pcg;
};

namespace {
Eigen::SparseMatrix<double> five_point(const Grid& g) {
  const auto n = static_cast<Eigen::Index>(g.num_interior());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) * 5);
  const double ax = 1.0 / (g.hx() * g.hx());
  const double ay = g.dimension() == 2 ? 1.0 / (g.hy() * g.hy()) : 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const NodeIndex nd = g.interior_node(static_cast<std::size_t>(k));
    const std::size_t i = g.i_of(nd);
    const std::size_t j = g.j_of(nd);
    t.emplace_back(k, k, 2.0 * ax + 2.0 * ay);
    auto couple = [&](NodeIndex other, double coef) {
      if (g.is_interior(other))
        t.emplace_back(k, static_cast<Eigen::Index>(g.interior_index(other)), -coef);
    };
    couple(g.node(i - 1, j), ax);
    couple(g.node(i + 1, j), ax);
    if (g.dimension() == 2) {
      couple(g.node(i, j - 1), ay);
      couple(g.node(i, j + 1), ay);
    }
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}
}  // namespace

PoissonOperator::PoissonOperator(Grid grid, LinearSolverKind kind)
    : grid_(std::move(grid)), kind_(kind), factor_(std::make_unique<Factorization>()) {
  matrix_ = five_point(grid_);
  if (kind_ == LinearSolverKind::automatic)
    kind_ = grid_.num_interior() <= kCholeskyLimit ? LinearSolverKind::cholesky
                                                    : LinearSolverKind::pcg;
  if (kind_ == LinearSolverKind::cholesky) {
    factor_->cholesky.compute(matrix_);
    if (factor_->cholesky.info() != Eigen::Success)
      throw LinearSolverError("sparse Cholesky factorization of the Laplacian failed", NAN);
  } else {
    factor_->pcg.setTolerance(kPcgTolerance);
    factor_->pcg.setMaxIterations(static_cast<Eigen::Index>(10 * grid_.num_interior() + 100));
    factor_->pcg.compute(matrix_);
    if (factor_->pcg.info() != Eigen::Success)
      throw LinearSolverError("incomplete Cholesky preconditioner setup failed", NAN);
  }
}

PoissonOperator::~PoissonOperator() = default;

Eigen::VectorXd PoissonOperator::apply(const Eigen::VectorXd& interior) const {
  if (interior.size() != matrix_.cols())
    throw InvalidArgument("apply: vector length does not match the interior node count");
  return matrix_ * interior;
}

Eigen::VectorXd PoissonOperator::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != matrix_.rows())
    throw InvalidArgument("solve: right-hand side length does not match the interior node count");
  if (!rhs.allFinite()) throw InvalidArgument("solve: right-hand side is not finite");
  if (kind_ == LinearSolverKind::cholesky) return factor_->cholesky.solve(rhs);

  Eigen::VectorXd y = factor_->pcg.solve(rhs);
  const double bnorm = rhs.norm();
  const double rel = bnorm > 0 ? (matrix_ * y - rhs).norm() / bnorm : 0.0;
  if (factor_->pcg.info() != Eigen::Success || rel > 10 * kPcgTolerance) {
    std::ostringstream os;
    os << "PCG did not converge: relative residual " << rel << " after "
       << factor_->pcg.iterations() << " iterations";
    throw LinearSolverError(os.str(), rel);
  }
  return y;
}

StateField PoissonOperator::solve_state(const Eigen::VectorXd& rhs) const {
  return {grid_, grid_.embed(solve(rhs))};
}

std::shared_ptr<const PoissonOperator> assemble_laplacian(const Grid& grid, LinearSolverKind kind) {
  return std::make_shared<const PoissonOperator>(grid, kind);
}

ControlField representer(const PoissonOperator& op, NodeIndex node) {
  const Grid& g = op.grid();
  if (!g.is_interior(node)) {
    std::ostringstream os;
    os << "representer requested at boundary node " << node
       << "; point evaluations vanish there";
    throw InvalidArgument(os.str());
  }
  // Dirac at `node` scaled by 1/cell area; A is symmetric so the adjoint solve
  // is a forward solve.
  Eigen::VectorXd dirac = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.num_interior()));
  dirac[static_cast<Eigen::Index>(g.interior_index(node))] = 1.0 / g.cell_area();
  return {g, op.solve(dirac)};
}

MaxState max_state(const StateField& y, double tol_active) {
  MaxState out{-std::numeric_limits<double>::infinity(), {}};
  if (y.values.size() == 0) return out;
  out.value = y.values.maxCoeff();
  for (Eigen::Index n = 0; n < y.values.size(); ++n)
    if (y.values[n] >= out.value - tol_active) out.argmax.push_back(static_cast<NodeIndex>(n));
  return out;
}

}  // namespace probust
