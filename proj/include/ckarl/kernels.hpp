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

#pragma once

// Data-parallel numeric kernels used across the engine. Every kernel in
// ckarl::kernels has a plain loop twin in ckarl::kernels::serial; both produce
// bit-identical results because each output element is computed with the same
// operation order regardless of the thread that owns it.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

#include "ckarl/param_vector.hpp"

namespace ckarl::kernels {

/// Dense row-major square matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Norm below which a vector is treated as degenerate for cosine purposes.
inline constexpr double kDegenerateNorm = 1e-12;

int max_threads();

enum class Exec { kParallel, kSerial };

/// out = base + sum_j weights[j] * vectors[j] + current.
void compose(std::span<const double> base, std::span<const ParamVector> vectors,
             std::span<const double> weights, std::span<const double> current,
             std::span<double> out);

/// Cosine similarity; exactly 0 when either norm is below kDegenerateNorm.
double cosine(std::span<const double> a, std::span<const double> b);

/// Pairwise cosine matrix, each pair computed once and mirrored.
Matrix cosine_matrix(std::span<const ParamVector> vectors);

/// Runs body(i) for i in [0, n) across threads. An exception thrown by any
/// iteration is held until the region ends and the lowest-index one is
/// rethrown, so nothing escapes the OpenMP region.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Fills one dim-sized buffer per item (in parallel), then sums the buffers
/// into out in item order. `produce(item, buffer)` receives a zeroed buffer.
template <class Produce>
void ordered_sum(std::size_t items, std::span<double> out, Produce&& produce);

namespace serial {

void compose(std::span<const double> base, std::span<const ParamVector> vectors,
             std::span<const double> weights, std::span<const double> current,
             std::span<double> out);

Matrix cosine_matrix(std::span<const ParamVector> vectors);

template <class Produce>
void ordered_sum(std::size_t items, std::span<double> out, Produce&& produce) {
  std::vector<double> buffer(out.size());
  for (std::size_t item = 0; item < items; ++item) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    produce(item, std::span<double>(buffer));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += buffer[i];
  }
}

}  // namespace serial

template <class Produce>
void ordered_sum(std::size_t items, std::span<double> out, Produce&& produce) {
  const std::size_t dim = out.size();
  std::vector<double> buffers(items * dim, 0.0);
  parallel_for(items, [&](std::size_t item) {
    produce(item, std::span<double>(buffers.data() + item * dim, dim));
  });
  for (std::size_t item = 0; item < items; ++item) {
    const double* b = buffers.data() + item * dim;
    for (std::size_t i = 0; i < dim; ++i) out[i] += b[i];
  }
}

template <class Produce>
void ordered_sum(Exec exec, std::size_t items, std::span<double> out, Produce&& produce) {
  if (exec == Exec::kSerial) {
    serial::ordered_sum(items, out, produce);
  } else {
    ordered_sum(items, out, produce);
  }
}

}  // namespace ckarl::kernels
