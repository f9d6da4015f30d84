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

#include <benchmark/benchmark.h>

#include "probust/cases.hpp"
#include "probust/chance_opt.hpp"
#include "probust/srd_prob.hpp"

namespace {

using namespace probust;

Problem two_parameter(std::size_t n) {
  ProblemData d;
  d.grid = Grid::square(n, 0.0, 1.0);
  const auto k = static_cast<Eigen::Index>(d.grid.num_interior());
  d.f0 = Eigen::VectorXd::Zero(k);
  d.phi.push_back(Eigen::VectorXd::Ones(k));
  d.phi.push_back(d.grid.sample_interior([](double x, double) { return 2.0 * (x - 0.5); }));
  d.alpha = 0.2;
  d.sigma.resize(2, 2);
  d.sigma << 1.0, 0.2, 0.2, 0.5;
  d.p = 0.9;
  return Problem(std::move(d));
}

void BM_Probability(benchmark::State& state) {
  const Problem pr = two_parameter(static_cast<std::size_t>(state.range(0)));
  const DirectionSet dirs = sample_sphere(2, static_cast<std::size_t>(state.range(1)), 1);
  const ControlField u = ControlField::zero(pr.grid());
  for (auto _ : state) benchmark::DoNotOptimize(probability(pr, u, dirs));
}
BENCHMARK(BM_Probability)->Args({33, 64})->Args({65, 64})->Args({65, 1024})->Args({129, 256})->Unit(benchmark::kMillisecond);

void BM_Subgradient(benchmark::State& state) {
  const Problem pr = two_parameter(static_cast<std::size_t>(state.range(0)));
  const DirectionSet dirs = sample_sphere(2, static_cast<std::size_t>(state.range(1)), 1);
  const ControlField u = ControlField::zero(pr.grid());
  for (auto _ : state) benchmark::DoNotOptimize(subgradient(pr, u, dirs).phi);
}
BENCHMARK(BM_Subgradient)->Args({33, 64})->Args({65, 64})->Args({129, 256})->Unit(benchmark::kMillisecond);

void BM_SolveScalar(benchmark::State& state) {
  const ScalarDensityModel model;
  const LinearObjective obj(Eigen::VectorXd::Ones(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve(model, obj, 0.99, Eigen::VectorXd::Ones(1)).certificate.lambda);
}
BENCHMARK(BM_SolveScalar)->Unit(benchmark::kMicrosecond);

void BM_SolveUnitSquare(benchmark::State& state) {
  const Problem pr = cases::unit_square(static_cast<std::size_t>(state.range(0)), 0.9);
  SolverOptions opts;
  opts.directions = 2;
  for (auto _ : state) benchmark::DoNotOptimize(solve(pr, opts).certificate.lambda);
}
BENCHMARK(BM_SolveUnitSquare)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
