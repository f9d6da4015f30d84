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

// Independent reference computations for the test suites.  Nothing here calls
// into the library's solvers: quadrature, tridiagonal and dense solves and a
// primal-dual active-set QP are written out directly.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace probust_test {

/// Adaptive Simpson quadrature on [a,b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                      int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m);
        const double rm = 0.5 * (m + r);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - l) / 6.0 * (fl + 4.0 * flm + fm);
        const double right = (r - m) / 6.0 * (fm + 4.0 * frm + fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
          return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, d - 1) + rec(m, r, fm, frm, fr, right, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

/// Standard normal distribution function by quadrature of the density.
inline double normal_cdf_quad(double x) {
  const auto dens = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  if (x >= 0.0) return 0.5 + simpson(dens, 0.0, x, 1e-14);
  return 0.5 - simpson(dens, x, 0.0, 1e-14);
}

/// Chi density with m degrees of freedom, written out from its definition.
inline double chi_density(int m, double t) {
  if (t <= 0.0) return m == 1 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
  const double log_k = -(0.5 * m - 1.0) * std::log(2.0) - std::lgamma(0.5 * m);
  return std::exp(log_k + (m - 1) * std::log(t) - 0.5 * t * t);
}

inline double chi_cdf_quad(int m, double t) {
  return simpson([m](double s) { return chi_density(m, s); }, 0.0, t, 1e-14);
}

/// Solves -y'' = f on a uniform grid with zero end values (Thomas algorithm).
/// `f` holds the n interior values, h the spacing.
inline Eigen::VectorXd thomas_poisson(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  Eigen::VectorXd c(n), d(n), y(n);
  const double diag = 2.0 / (h * h);
  const double off = -1.0 / (h * h);
  c[0] = off / diag;
  d[0] = f[0] / diag;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double den = diag - off * c[i - 1];
    c[i] = off / den;
    d[i] = (f[i] - off * d[i - 1]) / den;
  }
  y[n - 1] = d[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) y[i] = d[i] - c[i] * y[i + 1];
  return y;
}

/// Dense five-point Laplacian on the interior of an nx x ny node grid
/// (ny == 1: three-point line operator).
inline Eigen::MatrixXd dense_laplacian(int nx, int ny, double hx, double hy) {
  if (ny == 1) {
    const int n = nx - 2;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      a(i, i) = 2.0 / (hx * hx);
      if (i > 0) a(i, i - 1) = -1.0 / (hx * hx);
      if (i + 1 < n) a(i, i + 1) = -1.0 / (hx * hx);
    }
    return a;
  }
  const int mx = nx - 2;
  const int my = ny - 2;
  const int n = mx * my;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < my; ++j) {
    for (int i = 0; i < mx; ++i) {
      const int k = i + mx * j;
      a(k, k) = 2.0 / (hx * hx) + 2.0 / (hy * hy);
      if (i > 0) a(k, k - 1) = -1.0 / (hx * hx);
      if (i + 1 < mx) a(k, k + 1) = -1.0 / (hx * hx);
      if (j > 0) a(k, k - mx) = -1.0 / (hy * hy);
      if (j + 1 < my) a(k, k + mx) = -1.0 / (hy * hy);
    }
  }
  return a;
}

struct BoundQpResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multiplier;
  int iterations = 0;
  bool converged = false;
};

/// Primal-dual active set method for  min 1/2 x^T H x + g^T x  s.t.  x <= b,
/// H symmetric positive definite.
inline BoundQpResult pdas_upper_bounds(const Eigen::MatrixXd& H, const Eigen::VectorXd& g, const Eigen::VectorXd& b,
                                       int max_iter = 500) {
  const Eigen::Index n = g.size();
  BoundQpResult r;
  r.x = H.ldlt().solve(-g);
  r.multiplier = Eigen::VectorXd::Zero(n);
  std::vector<bool> active(static_cast<std::size_t>(n), false);
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<bool> next(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] = r.multiplier[i] + (r.x[i] - b[i]) > 0.0;
    if (it > 1 && next == active) {
      r.iterations = it - 1;
      r.converged = true;
      return r;
    }
    active = next;
    std::vector<Eigen::Index> fr, ac;
    for (Eigen::Index i = 0; i < n; ++i) (active[static_cast<std::size_t>(i)] ? ac : fr).push_back(i);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i : ac) x[i] = b[i];
    if (!fr.empty()) {
      const auto k = static_cast<Eigen::Index>(fr.size());
      Eigen::MatrixXd hff(k, k);
      Eigen::VectorXd rhs(k);
      for (Eigen::Index a = 0; a < k; ++a) {
        rhs[a] = -g[fr[a]];
        for (Eigen::Index c : ac) rhs[a] -= H(fr[a], c) * b[c];
        for (Eigen::Index c = 0; c < k; ++c) hff(a, c) = H(fr[a], fr[c]);
      }
      const Eigen::VectorXd xf = hff.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < k; ++a) x[fr[a]] = xf[a];
    }
    r.x = x;
    const Eigen::VectorXd grad = H * x + g;
    r.multiplier.setZero();
    for (Eigen::Index i : ac) r.multiplier[i] = -grad[i];
  }
  r.iterations = max_iter;
  return r;
}

}  // namespace probust_test
