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

#include "probust/fields.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "probust/errors.hpp"

namespace probust {

namespace {

double parse_number(const std::string& text, const std::string& expr) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw InvalidArgument("bad number '" + text + "' in field expression '" + expr + "'");
  return v;
}

struct Parsed {
  double scale = 1.0;
  std::string name;
  std::string arg;
};

Parsed split(const std::string& expr) {
  Parsed p;
  std::string body = expr;
  const auto star = body.find('*');
  if (star != std::string::npos) {
    p.scale = parse_number(body.substr(0, star), expr);
    body = body.substr(star + 1);
  }
  const auto colon = body.find(':');
  p.name = body.substr(0, colon);
  if (colon != std::string::npos) p.arg = body.substr(colon + 1);
  return p;
}

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read field file '" + path + "'");
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(tok, "file:" + path));
  return out;
}

std::function<double(double, double)> analytic(const Parsed& p, const std::string& expr) {
  if (p.name == "zero") return [](double, double) { return 0.0; };
  if (p.name == "constant") {
    const double c = parse_number(p.arg, expr);
    return [c](double, double) { return c; };
  }
  if (p.name == "unit_square_source")
    return [](double x, double y) { return 2.0 * (x * (1.0 - x) + y * (1.0 - y)); };
  if (p.name == "square_sine_source") {
    return [](double x, double y) {
      const double sx = std::sin(x) * std::sin(x);
      const double sy = std::sin(y) * std::sin(y);
      const double cx = std::cos(x) * std::cos(x);
      const double cy = std::cos(y) * std::cos(y);
      return 2.0 * sx * (sy - cy) + 2.0 * sy * (sx - cx);
    };
  }
  if (p.name == "sine_product") {
    const double k = p.arg.empty() ? 1.0 : parse_number(p.arg, expr);
    return [k](double x, double y) { return k * std::sin(x) * std::sin(y); };
  }
  if (p.name == "gaussian_bump")
    return [](double x, double y) { return std::exp(-((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5)) / 0.02); };
  throw InvalidArgument("unknown field expression '" + expr + "'");
}

}  // namespace

void check_field_expression(const std::string& expr) {
  const Parsed p = split(expr);
  if (p.name == "file") {
    if (!std::filesystem::is_regular_file(p.arg)) throw InvalidArgument("field file '" + p.arg + "' does not exist");
    return;
  }
  (void)analytic(p, expr);
}

Eigen::VectorXd evaluate_field(const std::string& expr, const Grid& grid) {
  const Parsed p = split(expr);
  if (p.name != "file") return p.scale * grid.sample_interior(analytic(p, expr));
  const std::vector<double> v = read_values(p.arg);
  const Eigen::Map<const Eigen::VectorXd> raw(v.data(), static_cast<Eigen::Index>(v.size()));
  if (v.size() == grid.num_interior()) return p.scale * raw;
  if (v.size() == grid.num_nodes()) return p.scale * grid.restrict(raw);
  throw InvalidArgument("field file '" + p.arg + "' has " + std::to_string(v.size()) + " values; expected " +
                        std::to_string(grid.num_interior()) + " or " + std::to_string(grid.num_nodes()));
}

}  // namespace probust
