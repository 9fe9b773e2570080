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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gssl/core/tensor.hpp"

namespace gssl::nn {

/// Numerically stable row-wise softmax.
template <class S>
Mat<S> softmax_rows(const Mat<S>& z) {
  Mat<S> p = z;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const S m = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - m).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

template <class S>
Mat<S> log_softmax_rows(const Mat<S>& z) {
  Mat<S> lp = z;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    const S m = lp.row(i).maxCoeff();
    const S lse = std::log((lp.row(i).array() - m).exp().sum()) + m;
    lp.row(i) = lp.row(i).array() - lse;
  }
  return lp;
}

inline void check_labels(Eigen::Index rows, Eigen::Index classes,
                         const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != rows)
    throw std::invalid_argument("cross entropy: label count mismatch");
  for (int l : labels)
    if (l < 0 || l >= classes)
      throw std::out_of_range("cross entropy: label out of range");
}

/// Per-sample negative log-likelihood of the labeled class.
template <class S>
std::vector<S> ce_per_sample(const Mat<S>& logits,
                             const std::vector<int>& labels) {
  check_labels(logits.rows(), logits.cols(), labels);
  const Mat<S> lp = log_softmax_rows(logits);
  std::vector<S> out(labels.size());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) out[i] = -lp(i, labels[i]);
  return out;
}

/// Mean cross entropy over the batch.
template <class S>
S ce_mean(const Mat<S>& logits, const std::vector<int>& labels) {
  const auto per = ce_per_sample(logits, labels);
  S sum = 0;
  for (S v : per) sum += v;
  return sum / static_cast<S>(per.size());
}

/// Gradient of sum_i coeff[i] * ce_i with respect to the logits:
/// row i = coeff[i] * (softmax(z_i) - onehot(label_i)).
template <class S>
Mat<S> ce_backward(const Mat<S>& logits, const std::vector<int>& labels,
                   const std::vector<S>& coeff) {
  check_labels(logits.rows(), logits.cols(), labels);
  if (coeff.size() != labels.size())
    throw std::invalid_argument("ce_backward: coeff size mismatch");
  Mat<S> dz = softmax_rows(logits);
  for (Eigen::Index i = 0; i < dz.rows(); ++i) {
    dz(i, labels[i]) -= S(1);
    dz.row(i) *= coeff[i];
  }
  return dz;
}

}  // namespace gssl::nn
