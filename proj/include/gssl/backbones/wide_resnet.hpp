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
#include <string>
#include <vector>

#include "gssl/backbones/backbone.hpp"
#include "gssl/core/rng.hpp"
#include "gssl/nn/activations.hpp"
#include "gssl/nn/batchnorm.hpp"
#include "gssl/nn/conv2d.hpp"

namespace gssl::backbones {

namespace detail {

/// Pre-activation wide block: bn-relu-conv3x3-bn-relu-conv3x3 plus either an
/// identity shortcut or, when the shape changes, a strided 1x1 conv applied
/// to the post-bn-relu input.
template <class S>
class WideBlock {
 public:
  WideBlock(int in_ch, int out_ch, int stride, Rng& rng)
      : bn1_(in_ch), conv1_(in_ch, out_ch, 3, stride, 1, /*bias=*/false),
        bn2_(out_ch), conv2_(out_ch, out_ch, 3, 1, 1, /*bias=*/false),
        equal_(in_ch == out_ch && stride == 1) {
    conv1_.init_he(rng);
    conv2_.init_he(rng);
    if (!equal_) {
      shortcut_ = std::make_unique<nn::Conv2d<S>>(in_ch, out_ch, 1, stride, 0,
                                                  /*bias=*/false);
      shortcut_->init_he(rng);
    }
  }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    auto a = relu1_.forward(bn1_.forward(x, train));
    auto y = conv2_.forward(
        relu2_.forward(bn2_.forward(conv1_.forward(a), train)));
    if (equal_) {
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += x.data[i];
    } else {
      auto sc = shortcut_->forward(a);
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += sc.data[i];
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& dy) {
    auto da = conv1_.backward(
        bn2_.backward(relu2_.backward(conv2_.backward(dy))));
    if (!equal_) {
      auto dsc = shortcut_->backward(dy);
      for (std::size_t i = 0; i < da.data.size(); ++i)
        da.data[i] += dsc.data[i];
    }
    Tensor<S> dx = bn1_.backward(relu1_.backward(da));
    if (equal_)
      for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dy.data[i];
    return dx;
  }

  void register_params(nn::ParamRegistry<S>& reg, const std::string& prefix) {
    bn1_.register_params(reg, prefix + ".bn1");
    conv1_.register_params(reg, prefix + ".conv1");
    bn2_.register_params(reg, prefix + ".bn2");
    conv2_.register_params(reg, prefix + ".conv2");
    if (shortcut_) shortcut_->register_params(reg, prefix + ".shortcut");
  }

 private:
  nn::BatchNorm2d<S> bn1_;
  nn::Conv2d<S> conv1_;
  nn::BatchNorm2d<S> bn2_;
  nn::Conv2d<S> conv2_;
  std::unique_ptr<nn::Conv2d<S>> shortcut_;
  nn::Relu<S> relu1_, relu2_;
  bool equal_;
};

}  // namespace detail

/// Wide residual network, depth = 6n+4, widen factor k: groups of widths
/// 16k/32k/64k with strides 1/2/2, a final bn-relu and global average
/// pooling. feature_dim = 64k.
template <class S>
class WideResNet final : public Backbone<S> {
 public:
  WideResNet(int depth, int widen, int input_size, Rng& rng)
      : stem_(3, 16, 3, 1, 1, /*bias=*/false), tail_(1), d_(64 * widen) {
    if ((depth - 4) % 6 != 0 || depth < 10)
      throw std::invalid_argument("WideResNet: depth must be 6n+4");
    if (widen < 1) throw std::invalid_argument("WideResNet: bad widen factor");
    if (input_size != 32 && input_size != 64)
      throw std::invalid_argument("WideResNet: input size must be 32 or 64");
    stem_.init_he(rng);
    const int n = (depth - 4) / 6;
    int in_ch = 16;
    const int widths[3] = {16 * widen, 32 * widen, 64 * widen};
    for (int group = 0; group < 3; ++group) {
      for (int i = 0; i < n; ++i) {
        const int stride = (group > 0 && i == 0) ? 2 : 1;
        blocks_.push_back(std::make_unique<detail::WideBlock<S>>(
            in_ch, widths[group], stride, rng));
        in_ch = widths[group];
      }
    }
    bn_final_ = nn::BatchNorm2d<S>(in_ch);
  }

  int feature_dim() const override { return d_; }

  Mat<S> forward(const Tensor<S>& x, bool train) override {
    auto t = stem_.forward(x);
    for (auto& block : blocks_) t = block->forward(t, train);
    act_ = relu_final_.forward(bn_final_.forward(t, train));
    return tail_.forward(act_);
  }

  Tensor<S> backward(const Mat<S>& dfeat) override {
    Tensor<S> d = bn_final_.backward(relu_final_.backward(tail_.backward(dfeat)));
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      d = (*it)->backward(d);
    return stem_.backward(d);
  }

  const Tensor<S>& activations() const override { return act_; }

  Tensor<S> activation_gradient(const Mat<S>& dfeat) const override {
    return tail_.backward(dfeat);
  }

  void register_params(nn::ParamRegistry<S>& reg,
                       const std::string& prefix) override {
    stem_.register_params(reg, prefix + ".stem");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      blocks_[i]->register_params(reg, prefix + ".block" + std::to_string(i));
    bn_final_.register_params(reg, prefix + ".bn_final");
  }

 private:
  nn::Conv2d<S> stem_;
  std::vector<std::unique_ptr<detail::WideBlock<S>>> blocks_;
  nn::BatchNorm2d<S> bn_final_;
  nn::Relu<S> relu_final_;
  nn::PooledTail<S> tail_;
  Tensor<S> act_;
  int d_;
};

}  // namespace gssl::backbones
