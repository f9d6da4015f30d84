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

// Uniform tensor grids, the 5-point Dirichlet Laplacian and the grid functions
// living on them.  Controls are stored on interior nodes only; states carry
// every node with homogeneous Dirichlet values on the boundary.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace probust {

/// Axis-aligned rectangle (x0,x1) x (y0,y1).  For line grids only x0,x1 are used.
struct Rectangle {
  double x0 = 0.0;
  double x1 = 1.0;
  double y0 = 0.0;
  double y1 = 1.0;
};

/// Flat index over all grid nodes, i + nx * j.
using NodeIndex = std::size_t;

/// Uniform node grid on a rectangle.  ny == 1 selects the one-dimensional line
/// grid on (x0,x1); otherwise both counts must be at least 3.
class Grid {
 public:
  Grid(std::size_t nx, std::size_t ny, Rectangle domain);

  /// One-dimensional grid with `nx` nodes on (a,b).
  static Grid line(std::size_t nx, double a, double b);
  /// Square grid with `n` nodes per axis.
  static Grid square(std::size_t n, double a, double b);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  const Rectangle& domain() const noexcept { return domain_; }
  int dimension() const noexcept { return ny_ == 1 ? 1 : 2; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  /// Quadrature weight of one interior node (hx*hy, or hx on a line).
  double cell_area() const noexcept { return dimension() == 1 ? hx_ : hx_ * hy_; }

  std::size_t num_nodes() const noexcept { return nx_ * ny_; }
  std::size_t num_interior() const noexcept;

  NodeIndex node(std::size_t i, std::size_t j = 0) const noexcept { return i + nx_ * j; }
  std::size_t i_of(NodeIndex n) const noexcept { return n % nx_; }
  std::size_t j_of(NodeIndex n) const noexcept { return n / nx_; }
  std::array<double, 2> coords(NodeIndex n) const noexcept;

  bool is_interior(NodeIndex n) const noexcept;
  /// Position of an interior node in control vectors; throws for boundary nodes.
  std::size_t interior_index(NodeIndex n) const;
  NodeIndex interior_node(std::size_t k) const noexcept;

  /// Node whose coordinates match (x,y) within `tol`, if any.
  std::optional<NodeIndex> find_node(double x, double y = 0.0, double tol = 1e-9) const;

  /// Samples f at interior nodes (control layout).
  Eigen::VectorXd sample_interior(const std::function<double(double, double)>& f) const;
  /// Samples f at all nodes (state layout).
  Eigen::VectorXd sample_nodes(const std::function<double(double, double)>& f) const;

  /// Extends an interior vector by zeros on the boundary.
  Eigen::VectorXd embed(const Eigen::VectorXd& interior) const;
  /// Restricts a node vector to the interior.
  Eigen::VectorXd restrict(const Eigen::VectorXd& nodes) const;

  /// Discrete L2(D) inner product of two interior vectors.
  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm(const Eigen::VectorXd& a) const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept;

 private:
  std::size_t nx_;
  std::size_t ny_;
  Rectangle domain_;
  double hx_;
  double hy_;
};

/// Grid function on interior nodes, an element of the discrete L2(D).
struct ControlField {
  Grid grid;
  Eigen::VectorXd values;

  static ControlField zero(const Grid& g);
  static ControlField from(const Grid& g, Eigen::VectorXd v);
  double inner(const ControlField& other) const { return grid.inner(values, other.values); }
  double norm() const { return grid.norm(values); }
};

/// Grid function on all nodes with zero boundary values.
struct StateField {
  Grid grid;
  Eigen::VectorXd values;

  double at(NodeIndex n) const { return values[static_cast<Eigen::Index>(n)]; }
};

enum class LinearSolverKind {
  automatic,  ///< sparse Cholesky up to a size limit, PCG beyond it
  cholesky,
  pcg,
};

/// Five-point discretization of -Laplace with homogeneous Dirichlet values,
/// acting on interior unknowns.  Immutable after construction and safe to
/// share between threads.
class PoissonOperator {
 public:
  explicit PoissonOperator(Grid grid, LinearSolverKind kind = LinearSolverKind::automatic);
  ~PoissonOperator();
  PoissonOperator(const PoissonOperator&) = delete;
  PoissonOperator& operator=(const PoissonOperator&) = delete;

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::SparseMatrix<double>& matrix() const noexcept { return matrix_; }
  LinearSolverKind kind() const noexcept { return kind_; }

  /// Above this many unknowns `automatic` switches to PCG.
  static constexpr std::size_t kCholeskyLimit = 400000;
  /// Relative residual target of the PCG path.
  static constexpr double kPcgTolerance = 1e-10;

  Eigen::VectorXd apply(const Eigen::VectorXd& interior) const;
  /// Solves A y = rhs for interior unknowns.  Throws LinearSolverError.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// Solves and embeds into a full state (boundary zero).
  StateField solve_state(const Eigen::VectorXd& rhs) const;

 private:
  struct Factorization;

  Grid grid_;
  LinearSolverKind kind_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Factorization> factor_;
};

/// Assembles and factorizes the Laplacian for `grid`.
std::shared_ptr<const PoissonOperator> assemble_laplacian(
    const Grid& grid, LinearSolverKind kind = LinearSolverKind::automatic);

/// L2 representer u_x of the point evaluation h -> [A^{-1} h](x): the discrete
/// inner product (u_x, h) equals [A^{-1} h](x) for every h.
ControlField representer(const PoissonOperator& op, NodeIndex node);

struct MaxState {
  double value;
  std::vector<NodeIndex> argmax;
};

/// Maximum over all nodes and the nodes within `tol_active` (absolute) of it.
MaxState max_state(const StateField& y, double tol_active = 1e-10);

}  // namespace probust
