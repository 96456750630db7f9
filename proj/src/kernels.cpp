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

#include "ckarl/kernels.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ckarl::kernels {
namespace {

// Below this many coordinates the fork/join cost dominates.
constexpr long long kParallelCoords = 1 << 14;

void check_compose_args(std::span<const double> base, std::span<const ParamVector> vectors,
                        std::span<const double> weights, std::span<const double> current,
                        std::span<double> out) {
  require_same_length(vectors.size(), weights.size());
  require_same_length(base.size(), current.size());
  require_same_length(base.size(), out.size());
  for (const auto& v : vectors) require_same_length(v.size(), base.size());
}

double cosine_from_dots(double ab, double aa, double bb) {
  constexpr double kMinSquared = kDegenerateNorm * kDegenerateNorm;
  if (aa < kMinSquared || bb < kMinSquared) return 0.0;
  // sqrt(aa * aa) == aa exactly, so self-similarity is exactly 1.
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

double plain_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void compose(std::span<const double> base, std::span<const ParamVector> vectors,
             std::span<const double> weights, std::span<const double> current,
             std::span<double> out) {
  check_compose_args(base, vectors, weights, current, out);
  const long long d = static_cast<long long>(base.size());
  const std::size_t k = vectors.size();
#pragma omp parallel for schedule(static) if (d >= kParallelCoords)
  for (long long i = 0; i < d; ++i) {
    double acc = base[i];
    for (std::size_t j = 0; j < k; ++j) acc += weights[j] * vectors[j][i];
    out[i] = acc + current[i];
  }
}

double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size());
  return cosine_from_dots(plain_dot(a, b), plain_dot(a, a), plain_dot(b, b));
}

Matrix cosine_matrix(std::span<const ParamVector> vectors) {
  const std::size_t n = vectors.size();
  for (const auto& v : vectors) require_same_length(v.size(), vectors.front().size());
  std::vector<double> self(n);
  for (std::size_t i = 0; i < n; ++i) self[i] = plain_dot(vectors[i], vectors[i]);

  Matrix m(n);
  const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) if (rows > 2)
  for (long long i = 0; i < rows; ++i) {
    m(i, i) = cosine_from_dots(self[i], self[i], self[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double s = cosine_from_dots(plain_dot(vectors[i], vectors[j]), self[i], self[j]);
      m(i, j) = s;
      m(j, i) = s;
    }
  }
  return m;
}

namespace serial {

void compose(std::span<const double> base, std::span<const ParamVector> vectors,
             std::span<const double> weights, std::span<const double> current,
             std::span<double> out) {
  check_compose_args(base, vectors, weights, current, out);
  for (std::size_t i = 0; i < base.size(); ++i) {
    double acc = base[i];
    for (std::size_t j = 0; j < vectors.size(); ++j) acc += weights[j] * vectors[j][i];
    out[i] = acc + current[i];
  }
}

Matrix cosine_matrix(std::span<const ParamVector> vectors) {
  const std::size_t n = vectors.size();
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double s = cosine(vectors[i], vectors[j]);
      m(i, j) = s;
      m(j, i) = s;
    }
  }
  return m;
}

}  // namespace serial
}  // namespace ckarl::kernels
