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

#include "gssl/gatenet/model.hpp"

namespace gssl::train {

struct LdamConfig {
  double max_margin = 0.5;
  double scale = 30.0;
  int drw_start_epoch = 160;  // 1-based epoch at which reweighting kicks in
  double beta = 0.9999;
};

/// Label-distribution-aware margin loss with deferred reweighting.
/// Margins scale with n_j^(-1/4), normalized so the rarest class gets
/// max_margin. From drw_start_epoch on, per-class effective-number weights
/// (1 - beta) / (1 - beta^n_j), normalized to mean 1, reweight the per-sample
/// losses; the reduction is the weighted mean.
template <class S>
class LdamDrwLoss final : public gatenet::ClassifierObjective<S> {
 public:
  LdamDrwLoss(const std::vector<long>& class_counts, const LdamConfig& cfg,
              int epoch)
      : scale_(static_cast<S>(cfg.scale)) {
    if (class_counts.empty())
      throw std::invalid_argument("ldam: class counts unknown");
    const int k = static_cast<int>(class_counts.size());
    margin_.resize(k);
    double max_inv = 0.0;
    for (long n : class_counts) {
      if (n <= 0) throw std::invalid_argument("ldam: class count <= 0");
      max_inv = std::max(max_inv, 1.0 / std::pow(static_cast<double>(n), 0.25));
    }
    for (int j = 0; j < k; ++j)
      margin_[j] = static_cast<S>(
          cfg.max_margin *
          (1.0 / std::pow(static_cast<double>(class_counts[j]), 0.25)) /
          max_inv);

    weight_.assign(k, S(1));
    if (epoch >= cfg.drw_start_epoch) {
      double sum = 0.0;
      std::vector<double> w(k);
      for (int j = 0; j < k; ++j) {
        const double effective =
            1.0 - std::pow(cfg.beta, static_cast<double>(class_counts[j]));
        w[j] = (1.0 - cfg.beta) / effective;
        sum += w[j];
      }
      for (int j = 0; j < k; ++j)
        weight_[j] = static_cast<S>(w[j] * k / sum);
    }
  }

  S loss(const Mat<S>& logits, const std::vector<int>& labels,
         Mat<S>* dlogits) const override {
    nn::check_labels(logits.rows(), logits.cols(), labels);
    if (logits.cols() != static_cast<Eigen::Index>(margin_.size()))
      throw std::invalid_argument("ldam: class count mismatch");
    Mat<S> z = logits;
    for (Eigen::Index i = 0; i < z.rows(); ++i)
      z(i, labels[i]) -= margin_[labels[i]];
    z *= scale_;

    const auto per = nn::ce_per_sample(z, labels);
    S num = 0, den = 0;
    for (std::size_t i = 0; i < per.size(); ++i) {
      num += weight_[labels[i]] * per[i];
      den += weight_[labels[i]];
    }
    const S value = num / den;
    if (dlogits) {
      std::vector<S> coeff(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i)
        coeff[i] = scale_ * weight_[labels[i]] / den;
      *dlogits = nn::ce_backward(z, labels, coeff);
    }
    return value;
  }

  const std::vector<S>& margins() const { return margin_; }
  const std::vector<S>& weights() const { return weight_; }

 private:
  std::vector<S> margin_, weight_;
  S scale_;
};

}  // namespace gssl::train
