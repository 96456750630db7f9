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

#include "ckarl/vector_pool.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ckarl {
namespace {

bool is_zero(const ParamVector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

KnowledgePool::KnowledgePool(ParamVector base, std::size_t capacity, bool pin_null)
    : base_(std::move(base)), capacity_(capacity), null_pinned_(pin_null) {
  if (capacity_ < 1) throw ConfigError("pool capacity must be at least 1");
  if (null_pinned_) vectors_.emplace_back(base_.size(), 0.0);
}

KnowledgePool::KnowledgePool(ParamVector base, std::vector<ParamVector> vectors,
                             std::size_t capacity, bool null_pinned)
    : base_(std::move(base)),
      vectors_(std::move(vectors)),
      capacity_(capacity),
      null_pinned_(null_pinned) {
  if (capacity_ < 1) throw ConfigError("pool capacity must be at least 1");
  for (const auto& v : vectors_) require_same_length(v.size(), base_.size());
  if (null_pinned_ && (vectors_.empty() || !is_zero(vectors_.front()))) {
    throw ArgumentError("pinned pool must start with the null vector");
  }
}

void KnowledgePool::append(ParamVector v) {
  require_same_length(v.size(), base_.size());
  vectors_.push_back(std::move(v));
}

void KnowledgePool::replace_pair_with_average(std::size_t m, std::size_t n) {
  if (m >= vectors_.size() || n >= vectors_.size()) throw ArgumentError("merge index out of range");
  if (m == n) throw ArgumentError("cannot merge a vector with itself");
  if (!mergeable(m) || !mergeable(n)) throw ArgumentError("cannot merge null vector");

  const ParamVector& a = vectors_[m];
  const ParamVector& b = vectors_[n];
  ParamVector merged(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) merged[i] = 0.5 * (a[i] + b[i]);

  const auto hi = std::max(m, n);
  const auto lo = std::min(m, n);
  vectors_.erase(vectors_.begin() + static_cast<std::ptrdiff_t>(hi));
  vectors_.erase(vectors_.begin() + static_cast<std::ptrdiff_t>(lo));
  vectors_.push_back(std::move(merged));
}

AdaptationState::AdaptationState(std::vector<double> logits) { set_logits(std::move(logits)); }

void AdaptationState::set_logits(std::vector<double> logits) {
  weights_ = softmax_factors(logits);
  logits_ = std::move(logits);
}

std::vector<double> softmax_factors(std::span<const double> logits) {
  if (logits.empty()) throw ArgumentError("empty logits");
  double top = -std::numeric_limits<double>::infinity();
  for (double x : logits) {
    if (!std::isfinite(x)) throw ArgumentError("non-finite logit");
    top = std::max(top, x);
  }
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

ParamVector compose_params(const KnowledgePool& pool, std::span<const double> weights,
                           std::span<const double> current) {
  ParamVector out(pool.dim());
  kernels::compose(pool.base(), pool.vectors(), weights, current, out.span());
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  return kernels::cosine(a, b);
}

kernels::Matrix similarity_matrix(const KnowledgePool& pool) {
  if (pool.size() == 0) throw ArgumentError("empty pool");
  return kernels::cosine_matrix(pool.vectors());
}

std::pair<std::size_t, std::size_t> most_similar_pair(const KnowledgePool& pool) {
  if (pool.mergeable_count() < 2) throw ArgumentError("nothing to merge");
  const auto s = similarity_matrix(pool);
  const std::size_t first = pool.null_pinned() ? 1 : 0;
  std::pair<std::size_t, std::size_t> best{first, first + 1};
  double best_score = s(best.first, best.second);
  // Strict '>' in row-major order keeps the lexicographically smallest pair on ties.
  for (std::size_t m = first; m < pool.size(); ++m) {
    for (std::size_t n = m + 1; n < pool.size(); ++n) {
      if (s(m, n) > best_score) {
        best_score = s(m, n);
        best = {m, n};
      }
    }
  }
  return best;
}

KnowledgePool merge_pair(KnowledgePool pool, std::size_t m, std::size_t n) {
  pool.replace_pair_with_average(m, n);
  return pool;
}

KnowledgePool enforce_capacity(KnowledgePool pool, std::size_t* merges) {
  std::size_t count = 0;
  while (pool.size() > pool.capacity()) {
    const auto [m, n] = most_similar_pair(pool);
    pool.replace_pair_with_average(m, n);
    ++count;
  }
  if (merges != nullptr) *merges = count;
  return pool;
}

KnowledgePool add_vector(KnowledgePool pool, ParamVector v) {
  pool.append(std::move(v));
  return pool;
}

}  // namespace ckarl
