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

#include <string>

#include "gssl/backbones/backbone.hpp"
#include "gssl/core/rng.hpp"
#include "gssl/nn/activations.hpp"
#include "gssl/nn/batchnorm.hpp"
#include "gssl/nn/conv2d.hpp"

namespace gssl::backbones {

/// Three-conv desk-scale CNN. The tail pools over a 2x2 grid instead of a
/// single global cell so quadrant identity survives pooling, which is what
/// the quadrant-local pseudo-label heads have to decode.
///
/// 3 -> w1 (stride 1) -> w2 (stride 2) -> w2 (stride 2), each conv followed
/// by batch norm and ReLU; feature_dim = w2 * grid^2.
template <class S>
class TinyCnn final : public Backbone<S> {
 public:
  TinyCnn(int input_size, Rng& rng, int width1 = 16, int width2 = 32,
          int pool_grid = 2)
      : conv1_(3, width1, 3, 1, 1), bn1_(width1),
        conv2_(width1, width2, 3, 2, 1), bn2_(width2),
        conv3_(width2, width2, 3, 2, 1), bn3_(width2), tail_(pool_grid),
        d_(tail_.out_dim(width2)) {
    if (input_size < 8 || input_size % 4 != 0 ||
        (input_size / 4) % pool_grid != 0)
      throw std::invalid_argument("TinyCnn: unsupported input size");
    conv1_.init_he(rng);
    conv2_.init_he(rng);
    conv3_.init_he(rng);
  }

  int feature_dim() const override { return d_; }

  Mat<S> forward(const Tensor<S>& x, bool train) override {
    auto t = relu1_.forward(bn1_.forward(conv1_.forward(x), train));
    t = relu2_.forward(bn2_.forward(conv2_.forward(t), train));
    act_ = relu3_.forward(bn3_.forward(conv3_.forward(t), train));
    return tail_.forward(act_);
  }

  Tensor<S> backward(const Mat<S>& dfeat) override {
    auto d = relu3_.backward(tail_.backward(dfeat));
    d = conv3_.backward(bn3_.backward(d));
    d = relu2_.backward(d);
    d = conv2_.backward(bn2_.backward(d));
    d = relu1_.backward(d);
    return conv1_.backward(bn1_.backward(d));
  }

  const Tensor<S>& activations() const override { return act_; }

  Tensor<S> activation_gradient(const Mat<S>& dfeat) const override {
    return tail_.backward(dfeat);
  }

  void register_params(nn::ParamRegistry<S>& reg,
                       const std::string& prefix) override {
    conv1_.register_params(reg, prefix + ".conv1");
    bn1_.register_params(reg, prefix + ".bn1");
    conv2_.register_params(reg, prefix + ".conv2");
    bn2_.register_params(reg, prefix + ".bn2");
    conv3_.register_params(reg, prefix + ".conv3");
    bn3_.register_params(reg, prefix + ".bn3");
  }

 private:
  nn::Conv2d<S> conv1_, conv2_, conv3_;
  nn::BatchNorm2d<S> bn1_, bn2_, bn3_;
  nn::Relu<S> relu1_, relu2_, relu3_;
  nn::PooledTail<S> tail_;
  Tensor<S> act_;
  int d_;
};

}  // namespace gssl::backbones
