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

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ckarl/kernels.hpp"
#include "ckarl/param_vector.hpp"

namespace ckarl {

/// Frozen base parameters plus an ordered, capacity-bounded list of knowledge
/// vectors. When the null vector is pinned it sits at index 0, counts toward
/// the capacity and never takes part in merging.
class KnowledgePool {
 public:
  /// Pool holding only the pinned null vector (or nothing, when unpinned).
  KnowledgePool(ParamVector base, std::size_t capacity, bool pin_null = true);
  KnowledgePool(ParamVector base, std::vector<ParamVector> vectors, std::size_t capacity,
                bool null_pinned);

  const ParamVector& base() const noexcept { return base_; }
  std::span<const ParamVector> vectors() const noexcept { return vectors_; }
  const ParamVector& operator[](std::size_t i) const { return vectors_.at(i); }
  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dim() const noexcept { return base_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool null_pinned() const noexcept { return null_pinned_; }

  bool mergeable(std::size_t i) const noexcept { return !(null_pinned_ && i == 0); }
  std::size_t mergeable_count() const noexcept {
    return null_pinned_ ? vectors_.size() - 1 : vectors_.size();
  }

  void append(ParamVector v);
  /// Removes v_m and v_n, then appends their average.
  void replace_pair_with_average(std::size_t m, std::size_t n);

  bool operator==(const KnowledgePool&) const = default;

 private:
  ParamVector base_;
  std::vector<ParamVector> vectors_;
  std::size_t capacity_;
  bool null_pinned_;
};

/// Softmax weights over a set of logits (logits for the adaptation factors).
class AdaptationState {
 public:
  explicit AdaptationState(std::vector<double> logits);

  std::span<const double> logits() const noexcept { return logits_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return logits_.size(); }

  void set_logits(std::vector<double> logits);

 private:
  std::vector<double> logits_;
  std::vector<double> weights_;
};

/// Max-subtracted softmax. Throws ArgumentError on empty or non-finite input.
std::vector<double> softmax_factors(std::span<const double> logits);

/// base + sum_j weights[j] * vectors[j] + current.
ParamVector compose_params(const KnowledgePool& pool, std::span<const double> weights,
                           std::span<const double> current);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

kernels::Matrix similarity_matrix(const KnowledgePool& pool);

/// Most cosine-similar pair (m < n) among mergeable vectors. Ties resolve to
/// the lexicographically smallest pair.
std::pair<std::size_t, std::size_t> most_similar_pair(const KnowledgePool& pool);

KnowledgePool merge_pair(KnowledgePool pool, std::size_t m, std::size_t n);

/// Greedily merges the most similar pair until size() <= capacity().
/// `merges`, when given, receives the number of merges performed.
KnowledgePool enforce_capacity(KnowledgePool pool, std::size_t* merges = nullptr);

/// Appends without enforcing capacity.
KnowledgePool add_vector(KnowledgePool pool, ParamVector v);

}  // namespace ckarl
