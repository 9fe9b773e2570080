// Copyright 2026 The GSSL Authors.
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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gssl/core/rng.hpp"
#include "gssl/datasets/dataset.hpp"

namespace gssl::datasets {

/// Exponential-decay class-size profile. rho is the ratio between the
/// rarest and the most frequent class after decay.
struct ImbalanceSpec {
  double rho = 1.0;
  int num_classes = 0;
  std::vector<long> base_counts;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(rho > 0.0) || rho > 1.0)
      throw std::invalid_argument("imbalance: rho must be in (0, 1]");
    if (num_classes < 2)
      throw std::invalid_argument("imbalance: need at least 2 classes");
    if (static_cast<int>(base_counts.size()) != num_classes)
      throw std::invalid_argument("imbalance: base_counts size mismatch");
    for (long n : base_counts)
      if (n <= 0) throw std::invalid_argument("imbalance: base count <= 0");
  }
};

/// Per-class decayed counts, floor(n_i * rho^(i / (K-1))). Floor keeps the
/// last class at exactly floor(n * rho) and never asks for more samples than
/// exist.
inline std::vector<long> imbalance_counts(const ImbalanceSpec& spec) {
  spec.validate();
  std::vector<long> counts(spec.num_classes);
  for (int i = 0; i < spec.num_classes; ++i) {
    const double exponent =
        static_cast<double>(i) / static_cast<double>(spec.num_classes - 1);
    const double value =
        static_cast<double>(spec.base_counts[i]) * std::pow(spec.rho, exponent);
    counts[i] = static_cast<long>(std::floor(value));
  }
  return counts;
}

/// Selects the first n_i samples per class under a seed-determined
/// permutation of each class list. The resulting index set is returned in
/// ascending dataset order; the test split is never touched.
inline DatasetSplit build_imbalanced(const DatasetSplit& train,
                                     const ImbalanceSpec& spec) {
  const auto counts = imbalance_counts(spec);
  if (static_cast<int>(train.by_class.size()) != spec.num_classes)
    throw std::invalid_argument("build_imbalanced: class count mismatch");
  DatasetSplit out;
  out.base = train.base;
  out.role = SplitRole::Train;
  for (int c = 0; c < spec.num_classes; ++c) {
    auto pool = train.by_class[c];
    if (static_cast<long>(pool.size()) < counts[c])
      throw std::invalid_argument(
          "build_imbalanced: class " + std::to_string(c) +
          " has too few samples");
    Rng rng = Rng::derive(spec.seed, static_cast<std::uint64_t>(c));
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    out.indices.insert(out.indices.end(), pool.begin(),
                       pool.begin() + counts[c]);
  }
  std::sort(out.indices.begin(), out.indices.end());
  out.rebuild_by_class();
  return out;
}

/// Class-balanced labeled subset plus the full training pool as the
/// unlabeled split (labels hidden by convention; the labeled images stay in
/// the pool).
inline std::pair<DatasetSplit, DatasetSplit> semi_split(
    const DatasetSplit& train, int num_labeled, std::uint64_t seed) {
  const int k = train.base->num_classes;
  if (num_labeled <= 0 ||
      static_cast<std::size_t>(num_labeled) > train.size())
    throw std::invalid_argument("semi_split: bad num_labeled");
  if (num_labeled % k != 0)
    throw std::invalid_argument(
        "semi_split: num_labeled must be divisible by the class count");
  const int per_class = num_labeled / k;

  DatasetSplit labeled;
  labeled.base = train.base;
  labeled.role = SplitRole::Train;
  for (int c = 0; c < k; ++c) {
    auto pool = train.by_class[c];
    if (static_cast<int>(pool.size()) < per_class)
      throw std::invalid_argument("semi_split: class " + std::to_string(c) +
                                  " has fewer than " +
                                  std::to_string(per_class) + " samples");
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(c));
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    labeled.indices.insert(labeled.indices.end(), pool.begin(),
                           pool.begin() + per_class);
  }
  std::sort(labeled.indices.begin(), labeled.indices.end());
  labeled.rebuild_by_class();

  DatasetSplit unlabeled = train;
  unlabeled.role = SplitRole::Unlabeled;
  return {std::move(labeled), std::move(unlabeled)};
}

}  // namespace gssl::datasets
