// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels. Range argument 0 = Serial, 1 = Parallel.

#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "critvar/critical_solver.hpp"
#include "critvar/gm_transport.hpp"
#include "fixtures.hpp"

using namespace critvar;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

const ArrangementInput& family(int k, int n) {
  static std::map<std::pair<int, int>, ArrangementInput> cache;
  auto key = std::pair{k, n};
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::mt19937_64 rng(101);
    it = cache.emplace(key, fixtures::random_fixture(rng, k, n, true, "bench").input()).first;
  }
  return it->second;
}

void BM_Circuits(benchmark::State& state) {
  const auto& in = family(3, 9);
  for (auto _ : state) benchmark::DoNotOptimize(circuits(in.family, mode(state)));
}

void BM_OperatorFamily(benchmark::State& state) {
  const auto& in = family(3, 8);
  FlagComplex fc(in.family);
  auto sing = singular_subspace(fc, in.weights, euler_characteristic(in.family));
  auto cs = circuits(in.family);
  for (auto _ : state) {
    OperatorFamily ops(fc, in.weights, cs, sing, mode(state));
    benchmark::DoNotOptimize(ops.sing_dim());
  }
}

void BM_Solve(benchmark::State& state) {
  const auto& in = family(2, 8);
  MasterContext ctx(in.family, in.weights, in.fiber);
  SolverOptions opts;
  opts.exec = mode(state);
  opts.strategy = SolverStrategy::Multistart;
  for (auto _ : state) benchmark::DoNotOptimize(solve_critical(ctx, opts));
}

void BM_TransportAll(benchmark::State& state) {
  const auto& in = family(2, 6);
  FlagComplex fc(in.family);
  auto sing = singular_subspace(fc, in.weights, euler_characteristic(in.family));
  OperatorFamily ops(fc, in.weights, circuits(in.family), sing);
  auto x = in.fiber.numeric();
  std::vector<TransportTask> tasks;
  for (int i = 0; i < 16; ++i) {
    PathPoint end = x;
    end[0] += Complex(0.0, 0.01 * (i + 1));
    std::vector<Complex> v(sing.dim());
    v[static_cast<std::size_t>(i) % v.size()] = 1.0;
    tasks.push_back({Complex(1.0 + 0.1 * i), {x, end, x}, v});
  }
  for (auto _ : state) benchmark::DoNotOptimize(transport_all(ops, tasks, {}, mode(state)));
}

}  // namespace

BENCHMARK(BM_Circuits)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OperatorFamily)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransportAll)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
