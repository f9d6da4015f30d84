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

// Named field expressions used by configuration files:
//
//   zero | constant:<c> | unit_square_source | square_sine_source |
//   sine_product:<k> | gaussian_bump | file:<path>
//
// optionally prefixed by a scale factor, e.g. "0.5*sine_product:1".
// `file:` reads whitespace-separated nodal values, either one per interior
// node or one per node (boundary entries are then dropped).

#include <Eigen/Core>

#include <string>

#include "probust/grid_pde.hpp"

namespace probust {

/// Throws InvalidArgument for unknown names, bad numbers or unreadable files.
void check_field_expression(const std::string& expr);

/// Interior values of the expression on `grid`.
Eigen::VectorXd evaluate_field(const std::string& expr, const Grid& grid);

}  // namespace probust
