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

#include <doctest.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ckarl/kernels.hpp"
#include "ckarl/policy_net.hpp"
#include "ckarl/trainer.hpp"
#include "test_util.hpp"

using namespace ckarl;
using ckarl::testing::random_vector;

namespace {

// Forces a real thread team even on a single-core machine.
struct ThreadScope {
  ThreadScope() {
#ifdef _OPENMP
    saved = omp_get_max_threads();
    omp_set_num_threads(4);
#endif
  }
  ~ThreadScope() {
#ifdef _OPENMP
    omp_set_num_threads(saved);
#endif
  }
  int saved = 1;
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("Matrix storage") {
  kernels::Matrix m(3);
  CHECK(m.size() == 3);
  CHECK(m.data().size() == 9);
  m(1, 2) = 4.0;
  CHECK(m.data()[5] == 4.0);
  CHECK(m(2, 1) == 0.0);
}

TEST_CASE("compose parallel equals serial bit for bit") {
  ThreadScope threads;
  auto gen = ckarl::testing::rng(21);
  for (std::size_t d : {std::size_t{3}, std::size_t{16384}, std::size_t{100003}}) {
    std::vector<ParamVector> vs;
    for (int j = 0; j < 4; ++j) vs.push_back(random_vector(gen, d));
    const auto base = random_vector(gen, d);
    const auto cur = random_vector(gen, d);
    const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    ParamVector a(d), b(d);
    kernels::compose(base, vs, w, cur, a.span());
    kernels::serial::compose(base, vs, w, cur, b.span());
    CHECK(a == b);
  }
}

TEST_CASE("compose validates every length") {
  std::vector<ParamVector> vs{ParamVector{1, 2}};
  ParamVector out(2);
  CHECK_THROWS_AS(kernels::compose(ParamVector{1, 1}, vs, std::vector<double>{1, 1}, ParamVector{0, 0},
                                   out.span()),
                  ArgumentError);
  CHECK_THROWS_AS(kernels::compose(ParamVector{1, 1, 1}, vs, std::vector<double>{1}, ParamVector{0, 0},
                                   out.span()),
                  ArgumentError);
  std::vector<ParamVector> bad{ParamVector{1, 2, 3}};
  CHECK_THROWS_AS(kernels::compose(ParamVector{1, 1}, bad, std::vector<double>{1}, ParamVector{0, 0},
                                   out.span()),
                  ArgumentError);
}

TEST_CASE("cosine_matrix parallel equals serial bit for bit") {
  ThreadScope threads;
  auto gen = ckarl::testing::rng(22);
  std::vector<ParamVector> vs;
  for (int j = 0; j < 9; ++j) vs.push_back(random_vector(gen, 1475));
  vs.push_back(ParamVector(1475));
  CHECK(kernels::cosine_matrix(vs) == kernels::serial::cosine_matrix(vs));
}

TEST_CASE("cosine_matrix rejects ragged input") {
  std::vector<ParamVector> vs{ParamVector{1, 0}, ParamVector{1, 0, 0}};
  CHECK_THROWS_AS(kernels::cosine_matrix(vs), ArgumentError);
}

TEST_CASE("ordered_sum is independent of the thread count") {
  ThreadScope threads;
  auto gen = ckarl::testing::rng(23);
  std::vector<ParamVector> items;
  for (int i = 0; i < 37; ++i) items.push_back(random_vector(gen, 50, 1e3));
  auto produce = [&](std::size_t i, std::span<double> buf) {
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] = items[i][k] * (1.0 + 1e-3 * i);
  };
  ParamVector par(50), ser(50), dispatch(50);
  kernels::ordered_sum(items.size(), par.span(), produce);
  kernels::serial::ordered_sum(items.size(), ser.span(), produce);
  kernels::ordered_sum(kernels::Exec::kSerial, items.size(), dispatch.span(), produce);
  CHECK(par == ser);
  CHECK(dispatch == ser);
}

TEST_CASE("ordered_sum adds into existing contents") {
  ParamVector out{1, 1};
  kernels::ordered_sum(2, out.span(), [](std::size_t i, std::span<double> b) { b[0] = double(i); });
  CHECK(out == ParamVector{2, 1});
}

TEST_CASE("actor and critic gradients agree across execution modes") {
  ThreadScope threads;
  TrainConfig cfg;
  const auto a_shape = actor_shape(cfg);
  const auto c_shape = critic_shape(cfg);
  auto r1 = make_rng(3, 0, RngPurpose::kActorInit);
  auto r2 = make_rng(3, 0, RngPurpose::kCriticInit);
  const auto theta = init_params(a_shape, r1);
  const auto critic = init_params(c_shape, r2);
  const auto batch = collect_batch(theta, a_shape, env::make_task(1), 3, 0, 0, 12, 0.99);
  const auto baselines = critic_values(critic, c_shape, batch);

  const auto par = actor_loss_grad(theta, a_shape, batch, baselines, 0.01, kernels::Exec::kParallel);
  const auto ser = actor_loss_grad(theta, a_shape, batch, baselines, 0.01, kernels::Exec::kSerial);
  CHECK(par.grad == ser.grad);
  CHECK(par.loss == ser.loss);

  const auto cpar = critic_loss_grad(critic, c_shape, batch, kernels::Exec::kParallel);
  const auto cser = critic_loss_grad(critic, c_shape, batch, kernels::Exec::kSerial);
  CHECK(cpar.grad == cser.grad);
  CHECK(cpar.loss == cser.loss);
}

TEST_CASE("max_threads is positive") { CHECK(kernels::max_threads() >= 1); }

}  // TEST_SUITE
