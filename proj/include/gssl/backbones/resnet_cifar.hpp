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

/// Basic residual block with the parameter-free shortcut: on a shape change
/// the identity path subsamples spatially and zero-pads channels, which
/// keeps the parameter count at the canonical value for this family.
template <class S>
class BasicBlockA {
 public:
  BasicBlockA(int in_ch, int out_ch, int stride, Rng& rng)
      : conv1_(in_ch, out_ch, 3, stride, 1, /*bias=*/false), bn1_(out_ch),
        conv2_(out_ch, out_ch, 3, 1, 1, /*bias=*/false), bn2_(out_ch),
        in_ch_(in_ch), out_ch_(out_ch), stride_(stride),
        projected_(stride != 1 || in_ch != out_ch) {
    conv1_.init_he(rng);
    conv2_.init_he(rng);
  }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    in_shape_ = {x.n, x.c, x.h, x.w};
    auto y = relu1_.forward(bn1_.forward(conv1_.forward(x), train));
    y = bn2_.forward(conv2_.forward(y), train);
    if (projected_) {
      add_shortcut(x, y);
    } else {
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += x.data[i];
    }
    return relu2_.forward(y);
  }

  Tensor<S> backward(const Tensor<S>& dy) {
    auto dz = relu2_.backward(dy);
    auto d = bn2_.backward(dz);
    d = conv2_.backward(d);
    d = relu1_.backward(d);
    d = bn1_.backward(d);
    Tensor<S> dx = conv1_.backward(d);
    if (projected_) {
      add_shortcut_grad(dz, dx);
    } else {
      for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dz.data[i];
    }
    return dx;
  }

  void register_params(nn::ParamRegistry<S>& reg, const std::string& prefix) {
    conv1_.register_params(reg, prefix + ".conv1");
    bn1_.register_params(reg, prefix + ".bn1");
    conv2_.register_params(reg, prefix + ".conv2");
    bn2_.register_params(reg, prefix + ".bn2");
  }

 private:
  void add_shortcut(const Tensor<S>& x, Tensor<S>& y) const {
    const int front = (out_ch_ - in_ch_) / 2;
    for (int b = 0; b < y.n; ++b)
      for (int c = 0; c < in_ch_; ++c)
        for (int oy = 0; oy < y.h; ++oy)
          for (int ox = 0; ox < y.w; ++ox)
            y.at(b, c + front, oy, ox) +=
                x.at(b, c, oy * stride_, ox * stride_);
  }

  void add_shortcut_grad(const Tensor<S>& dy, Tensor<S>& dx) const {
    const int front = (out_ch_ - in_ch_) / 2;
    for (int b = 0; b < dy.n; ++b)
      for (int c = 0; c < in_ch_; ++c)
        for (int oy = 0; oy < dy.h; ++oy)
          for (int ox = 0; ox < dy.w; ++ox)
            dx.at(b, c, oy * stride_, ox * stride_) +=
                dy.at(b, c + front, oy, ox);
  }

  nn::Conv2d<S> conv1_;
  nn::BatchNorm2d<S> bn1_;
  nn::Conv2d<S> conv2_;
  nn::BatchNorm2d<S> bn2_;
  nn::Relu<S> relu1_, relu2_;
  int in_ch_, out_ch_, stride_;
  bool projected_;
  std::array<int, 4> in_shape_{};
};

}  // namespace detail

/// Residual network in the compact layout used for 32x32-style inputs:
/// a 3x3 stem into three stages of widths 16/32/64 with n = (depth-2)/6
/// blocks each, strides 1/2/2, then global average pooling. feature_dim 64.
template <class S>
class ResNetCifar final : public Backbone<S> {
 public:
  ResNetCifar(int depth, int input_size, Rng& rng)
      : stem_(3, 16, 3, 1, 1, /*bias=*/false), bn_stem_(16), tail_(1) {
    if ((depth - 2) % 6 != 0 || depth < 8)
      throw std::invalid_argument("ResNetCifar: depth must be 6n+2");
    if (input_size != 32 && input_size != 64)
      throw std::invalid_argument("ResNetCifar: input size must be 32 or 64");
    stem_.init_he(rng);
    const int n = (depth - 2) / 6;
    int in_ch = 16;
    const int widths[3] = {16, 32, 64};
    for (int stage = 0; stage < 3; ++stage) {
      for (int i = 0; i < n; ++i) {
        const int stride = (stage > 0 && i == 0) ? 2 : 1;
        blocks_.push_back(std::make_unique<detail::BasicBlockA<S>>(
            in_ch, widths[stage], stride, rng));
        in_ch = widths[stage];
      }
    }
  }

  int feature_dim() const override { return 64; }

  Mat<S> forward(const Tensor<S>& x, bool train) override {
    auto t = relu_stem_.forward(bn_stem_.forward(stem_.forward(x), train));
    for (auto& block : blocks_) t = block->forward(t, train);
    act_ = std::move(t);
    return tail_.forward(act_);
  }

  Tensor<S> backward(const Mat<S>& dfeat) override {
    Tensor<S> d = tail_.backward(dfeat);
    for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it)
      d = (*it)->backward(d);
    d = relu_stem_.backward(d);
    return stem_.backward(bn_stem_.backward(d));
  }

  const Tensor<S>& activations() const override { return act_; }

  Tensor<S> activation_gradient(const Mat<S>& dfeat) const override {
    return tail_.backward(dfeat);
  }

  void register_params(nn::ParamRegistry<S>& reg,
                       const std::string& prefix) override {
    stem_.register_params(reg, prefix + ".stem");
    bn_stem_.register_params(reg, prefix + ".bn_stem");
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      blocks_[i]->register_params(reg, prefix + ".block" + std::to_string(i));
  }

 private:
  nn::Conv2d<S> stem_;
  nn::BatchNorm2d<S> bn_stem_;
  nn::Relu<S> relu_stem_;
  std::vector<std::unique_ptr<detail::BasicBlockA<S>>> blocks_;
  nn::PooledTail<S> tail_;
  Tensor<S> act_;
};

}  // namespace gssl::backbones
