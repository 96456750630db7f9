// Copyright 2026 The ckarl Authors
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


// Serial vs OpenMP timings of the hot kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "ckarl/kernels.hpp"
#include "ckarl/trainer.hpp"

namespace {

using namespace ckarl;

ParamVector gaussian(std::mt19937_64& gen, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  ParamVector v(d);
  for (auto& x : v) x = n(gen);
  return v;
}

struct ComposeInputs {
  ParamVector base, current;
  std::vector<ParamVector> vectors;
  std::vector<double> weights;
  ParamVector out;

  ComposeInputs(std::size_t d, std::size_t k) : out(d) {
    std::mt19937_64 gen(1);
    base = gaussian(gen, d);
    current = gaussian(gen, d);
    for (std::size_t j = 0; j < k; ++j) vectors.push_back(gaussian(gen, d));
    weights.assign(k, 1.0 / static_cast<double>(k));
  }
};

void BM_Compose(benchmark::State& state) {
  ComposeInputs in(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    kernels::compose(in.base, in.vectors, in.weights, in.current, in.out.span());
    benchmark::DoNotOptimize(in.out.data());
  }
}

void BM_ComposeSerial(benchmark::State& state) {
  ComposeInputs in(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) {
    kernels::serial::compose(in.base, in.vectors, in.weights, in.current, in.out.span());
    benchmark::DoNotOptimize(in.out.data());
  }
}

std::vector<ParamVector> pool_vectors(std::size_t n) {
  std::mt19937_64 gen(2);
  std::vector<ParamVector> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back(gaussian(gen, NetShape::actor().param_count()));
  return vs;
}

void BM_CosineMatrix(benchmark::State& state) {
  const auto vs = pool_vectors(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::cosine_matrix(vs));
}

void BM_CosineMatrixSerial(benchmark::State& state) {
  const auto vs = pool_vectors(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::cosine_matrix(vs));
}

struct LossInputs {
  NetShape shape = NetShape::actor();
  ParamVector theta;
  Batch batch;
  std::vector<std::vector<double>> baselines;

  LossInputs() {
    auto rng = make_rng(3, 0, RngPurpose::kActorInit);
    theta = init_params(shape, rng);
    batch = collect_batch(theta, shape, env::make_task(1), 3, 0, 0, 16, 0.99);
    for (const auto& t : batch) baselines.emplace_back(t.size(), 0.0);
  }
};

void BM_ActorLossGrad(benchmark::State& state) {
  LossInputs in;
  for (auto _ : state) {
    benchmark::DoNotOptimize(actor_loss_grad(in.theta, in.shape, in.batch, in.baselines, 0.01));
  }
}

void BM_ActorLossGradSerial(benchmark::State& state) {
  LossInputs in;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        actor_loss_grad(in.theta, in.shape, in.batch, in.baselines, 0.01, kernels::Exec::kSerial));
  }
}

void BM_CollectBatch(benchmark::State& state) {
  LossInputs in;
  std::uint64_t first = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(collect_batch(in.theta, in.shape, env::make_task(2), 4, 0, first, 16, 0.99));
    first += 16;
  }
}

}  // namespace

BENCHMARK(BM_Compose)->Arg(1475)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_ComposeSerial)->Arg(1475)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_CosineMatrix)->Arg(3)->Arg(16);
BENCHMARK(BM_CosineMatrixSerial)->Arg(3)->Arg(16);
BENCHMARK(BM_ActorLossGrad);
BENCHMARK(BM_ActorLossGradSerial);
BENCHMARK(BM_CollectBatch);

BENCHMARK_MAIN();
