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

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gssl/backbones/backbone.hpp"
#include "gssl/core/rng.hpp"
#include "gssl/core/tensor.hpp"
#include "gssl/nn/linear.hpp"
#include "gssl/nn/loss.hpp"
#include "gssl/nn/param.hpp"
#include "gssl/pretext/transforms.hpp"

namespace gssl::gatenet {

/// One training batch: the images, their class labels, and a row of pretext
/// pseudo-labels per sample, one per enabled task in canonical order.
template <class S>
struct Batch {
  Tensor<S> images;
  std::vector<int> labels;
  std::vector<int> pseudo;  // flattened (B, t)
  int num_tasks = 0;

  int size() const { return images.n; }
  int pseudo_at(int i, int task) const { return pseudo[i * num_tasks + task]; }
  std::vector<int> task_labels(int task) const {
    std::vector<int> out(size());
    for (int i = 0; i < size(); ++i) out[i] = pseudo_at(i, task);
    return out;
  }
};

/// Composite loss decomposition: total = classifier_loss + ssl_ratio *
/// gated_ssl, where gated_ssl is the batch mean of the per-sample
/// gate-weighted sum of per-task cross entropies.
template <class S>
struct LossBreakdown {
  S classifier_loss = 0;
  std::vector<S> ssl_losses;  // per task, batch mean (ungated)
  S gated_ssl = 0;
  S total = 0;
  S ssl_ratio = 0;
};

/// Classifier loss plug point: plain cross entropy by default, margin-based
/// objectives for imbalanced training. loss() returns the scalar and, when
/// dlogits is non-null, writes the gradient of that scalar.
template <class S>
class ClassifierObjective {
 public:
  virtual ~ClassifierObjective() = default;
  virtual S loss(const Mat<S>& logits, const std::vector<int>& labels,
                 Mat<S>* dlogits) const = 0;
};

template <class S>
class PlainCe final : public ClassifierObjective<S> {
 public:
  S loss(const Mat<S>& logits, const std::vector<int>& labels,
         Mat<S>* dlogits) const override {
    const S value = nn::ce_mean(logits, labels);
    if (dlogits) {
      std::vector<S> coeff(labels.size(),
                           S(1) / static_cast<S>(labels.size()));
      *dlogits = nn::ce_backward(logits, labels, coeff);
    }
    return value;
  }
};

/// Backbone + classifier head + one linear head per pretext task + the
/// softmax gate that weights the per-task losses. When built ungated the
/// gate is a constant uniform vector with no parameters.
template <class S>
class GatedModel {
 public:
  GatedModel() = default;

  int feature_dim() const { return backbone_->feature_dim(); }
  int num_classes() const { return q_; }
  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  bool gated() const { return gated_; }
  const std::vector<pretext::PretextTask>& tasks() const { return tasks_; }

  backbones::Backbone<S>& backbone() { return *backbone_; }
  const backbones::Backbone<S>& backbone() const { return *backbone_; }
  nn::Linear<S>& classifier() { return classifier_; }
  const nn::Linear<S>& classifier() const { return classifier_; }
  nn::Linear<S>& ssl_head(int n) { return ssl_heads_[n]; }
  nn::Linear<S>& gate_head() {
    if (!gated_) throw std::logic_error("model is ungated");
    return gate_;
  }

  Mat<S> features(const Tensor<S>& x, bool train) {
    return backbone_->forward(x, train);
  }

  /// Per-sample softmax gate values, shape (B, t). For an ungated model this
  /// is the constant 1/t matrix. Inference-only path, no caches touched.
  Mat<S> gate_forward(const Mat<S>& feats) const {
    if (feats.cols() != feature_dim())
      throw std::invalid_argument("gate_forward: feature dim mismatch");
    const int t = num_tasks();
    if (!gated_)
      return Mat<S>::Constant(feats.rows(), t, S(1) / static_cast<S>(t));
    return nn::softmax_rows<S>(gate_.eval(feats));
  }

  /// One forward pass feeding all heads, then the composite objective.
  /// With backward == true, gradients flow into the backbone, every head and
  /// the gate (scaled by lambda on the pretext side). The classifier loss is
  /// computed on the batch exactly as given, transformed pixels included.
  LossBreakdown<S> total_loss(const Batch<S>& batch, S lambda, bool train,
                              const ClassifierObjective<S>* objective = nullptr,
                              bool backward = false, Mat<S>* gates_out = nullptr,
                              Tensor<S>* dx_out = nullptr) {
    if (lambda < S(0)) throw std::invalid_argument("total_loss: lambda < 0");
    if (batch.num_tasks != num_tasks())
      throw std::invalid_argument("total_loss: task arity mismatch");
    const PlainCe<S> plain;
    const ClassifierObjective<S>& obj = objective ? *objective : plain;

    const Mat<S> feats = backbone_->forward(batch.images, train);
    Mat<S> dfeat = Mat<S>::Zero(feats.rows(), feats.cols());

    Mat<S> cls_logits = classifier_.forward(feats);
    Mat<S> dcls;
    LossBreakdown<S> out;
    out.ssl_ratio = lambda;
    out.classifier_loss =
        obj.loss(cls_logits, batch.labels, backward ? &dcls : nullptr);
    if (backward) dfeat += classifier_.backward(dcls);

    const auto ssl = ssl_forward_backward(feats, batch, lambda, backward,
                                          backward ? &dfeat : nullptr,
                                          gates_out);
    out.ssl_losses = ssl.per_task;
    out.gated_ssl = ssl.gated;
    out.total = out.classifier_loss + lambda * out.gated_ssl;

    if (backward) {
      Tensor<S> dx = backbone_->backward(dfeat);
      if (dx_out) *dx_out = std::move(dx);
    }
    return out;
  }

  struct SslResult {
    S gated = 0;
    std::vector<S> per_task;
  };

  /// The gated pretext-task part on already-computed features. gated =
  /// mean_i sum_n G(i,n) * ce_n(i). When backward is requested, gradients of
  /// scale * gated are accumulated into heads, gate and *dfeat.
  SslResult ssl_forward_backward(const Mat<S>& feats, const Batch<S>& batch,
                                 S scale, bool backward, Mat<S>* dfeat,
                                 Mat<S>* gates_out = nullptr) {
    const int b = static_cast<int>(feats.rows());
    const int t = num_tasks();
    const S inv_b = S(1) / static_cast<S>(b);

    Mat<S> gates;
    Mat<S> gate_logits;
    if (gated_) {
      gate_logits = gate_.forward(feats);
      gates = nn::softmax_rows<S>(gate_logits);
    } else {
      gates = Mat<S>::Constant(b, t, S(1) / static_cast<S>(t));
    }
    if (gates_out) *gates_out = gates;

    SslResult result;
    result.per_task.resize(t);
    Mat<S> per_sample(b, t);  // ce of task n on sample i
    std::vector<Mat<S>> task_logits(t);
    std::vector<std::vector<int>> task_labels(t);
    for (int n = 0; n < t; ++n) {
      task_labels[n] = batch.task_labels(n);
      task_logits[n] = ssl_heads_[n].forward(feats);
      const auto ce = nn::ce_per_sample(task_logits[n], task_labels[n]);
      S mean = 0;
      for (int i = 0; i < b; ++i) {
        per_sample(i, n) = ce[i];
        mean += ce[i];
      }
      result.per_task[n] = mean * inv_b;
    }

    S gated_sum = 0;
    for (int i = 0; i < b; ++i)
      for (int n = 0; n < t; ++n) gated_sum += gates(i, n) * per_sample(i, n);
    result.gated = gated_sum * inv_b;

    if (backward) {
      if (!dfeat) throw std::invalid_argument("ssl backward needs dfeat");
      // Head path: d(scale * gated)/d ce_n(i) = scale * G(i,n) / b.
      for (int n = 0; n < t; ++n) {
        std::vector<S> coeff(b);
        for (int i = 0; i < b; ++i) coeff[i] = scale * gates(i, n) * inv_b;
        const Mat<S> dz =
            nn::ce_backward(task_logits[n], task_labels[n], coeff);
        *dfeat += ssl_heads_[n].backward(dz);
      }
      // Gate path through the softmax:
      // d gated/d logit(i,n) = G(i,n) * (ce(i,n) - sum_m G(i,m) ce(i,m)) / b.
      if (gated_) {
        Mat<S> dlogits(b, t);
        for (int i = 0; i < b; ++i) {
          S weighted = 0;
          for (int m = 0; m < t; ++m) weighted += gates(i, m) * per_sample(i, m);
          for (int n = 0; n < t; ++n)
            dlogits(i, n) =
                scale * inv_b * gates(i, n) * (per_sample(i, n) - weighted);
        }
        *dfeat += gate_.backward(dlogits);
      }
    }
    return result;
  }

  void register_params(nn::ParamRegistry<S>& reg) {
    backbone_->register_params(reg, "backbone");
    classifier_.register_params(reg, "classifier");
    for (int n = 0; n < num_tasks(); ++n)
      ssl_heads_[n].register_params(
          reg, "ssl_head." + std::string(tasks_[n].name()));
    if (gated_) gate_.register_params(reg, "gate");
  }

  template <class T>
  friend GatedModel<T> build_model(
      std::unique_ptr<backbones::Backbone<T>> backbone, int q,
      std::vector<pretext::PretextTask> tasks, bool gated, Rng& rng);

 private:
  std::unique_ptr<backbones::Backbone<S>> backbone_;
  nn::Linear<S> classifier_;
  std::vector<nn::Linear<S>> ssl_heads_;
  nn::Linear<S> gate_;
  bool gated_ = true;
  std::vector<pretext::PretextTask> tasks_;
  int q_ = 0;
};

/// Assembles the full model. Heads use fan-in scaled uniform init; the gate
/// starts at zero so training begins from exactly uniform gate values.
template <class S>
GatedModel<S> build_model(std::unique_ptr<backbones::Backbone<S>> backbone,
                          int q, std::vector<pretext::PretextTask> tasks,
                          bool gated, Rng& rng) {
  if (q < 2) throw std::invalid_argument("build_model: need at least 2 classes");
  if (tasks.empty()) throw std::invalid_argument("build_model: no tasks");
  for (std::size_t i = 1; i < tasks.size(); ++i)
    if (static_cast<int>(tasks[i].kind) <= static_cast<int>(tasks[i - 1].kind))
      throw std::invalid_argument("build_model: tasks must be canonical");

  GatedModel<S> model;
  model.backbone_ = std::move(backbone);
  model.q_ = q;
  model.tasks_ = std::move(tasks);
  model.gated_ = gated;
  const int d = model.backbone_->feature_dim();
  model.classifier_ = nn::Linear<S>(d, q);
  model.classifier_.init_fan_in(rng);
  for (const auto& task : model.tasks_) {
    model.ssl_heads_.emplace_back(d, task.num_classes);
    model.ssl_heads_.back().init_fan_in(rng);
  }
  if (gated) {
    model.gate_ = nn::Linear<S>(d, model.num_tasks());
    model.gate_.init_zero();
  }
  return model;
}

}  // namespace gssl::gatenet
