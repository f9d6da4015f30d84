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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace probust {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid, field shape or problem data.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix is not symmetric positive definite.
class CovarianceError : public Error {
 public:
  CovarianceError(const std::string& what, std::ptrdiff_t pivot);
  /// Index of the failing pivot, -1 for symmetry failures.
  std::ptrdiff_t pivot() const noexcept { return pivot_; }

 private:
  std::ptrdiff_t pivot_;
};

/// A linear solve did not reach its residual target.
class LinearSolverError : public Error {
 public:
  LinearSolverError(const std::string& what, double residual);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// The expected state S(u,0) is not strictly below the threshold.
class SlaterViolation : public Error {
 public:
  SlaterViolation(double max_expected_state, double alpha);
  double max_expected_state() const noexcept { return max_state_; }
  double alpha() const noexcept { return alpha_; }

 private:
  double max_state_;
  double alpha_;
};

/// An iterative optimization method failed (no Slater point, iteration cap).
class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace probust
