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

#include <stdexcept>
#include <vector>

#include "gssl/core/tensor.hpp"

namespace gssl::nn {

/// Elementwise ReLU with a cached activity mask.
template <class S>
class Relu {
 public:
  Tensor<S> forward(const Tensor<S>& x) {
    Tensor<S> y = x;
    mask_.assign(x.count(), 0);
    for (std::size_t i = 0; i < y.data.size(); ++i) {
      if (y.data[i] > S(0)) {
        mask_[i] = 1;
      } else {
        y.data[i] = S(0);
      }
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& dy) const {
    if (dy.count() != mask_.size())
      throw std::invalid_argument("Relu: grad shape mismatch");
    Tensor<S> dx = dy;
    for (std::size_t i = 0; i < dx.data.size(); ++i)
      if (!mask_[i]) dx.data[i] = S(0);
    return dx;
  }

 private:
  std::vector<unsigned char> mask_;
};

/// Average pooling over a grid x grid partition of the spatial plane,
/// flattened to a feature vector. grid == 1 is global average pooling.
/// Feature layout: f[(c*grid + gy)*grid + gx].
template <class S>
class PooledTail {
 public:
  explicit PooledTail(int grid = 1) : grid_(grid) {
    if (grid <= 0) throw std::invalid_argument("PooledTail: bad grid");
  }

  int out_dim(int channels) const { return channels * grid_ * grid_; }
  int grid() const { return grid_; }

  Mat<S> forward(const Tensor<S>& x) {
    if (x.h % grid_ != 0 || x.w % grid_ != 0)
      throw std::invalid_argument("PooledTail: spatial size not divisible");
    n_ = x.n; c_ = x.c; h_ = x.h; w_ = x.w;
    const int cell_h = h_ / grid_, cell_w = w_ / grid_;
    const S inv = S(1) / static_cast<S>(cell_h * cell_w);
    Mat<S> f(x.n, out_dim(x.c));
    for (int b = 0; b < x.n; ++b)
      for (int c = 0; c < c_; ++c)
        for (int gy = 0; gy < grid_; ++gy)
          for (int gx = 0; gx < grid_; ++gx) {
            S sum = 0;
            for (int y = gy * cell_h; y < (gy + 1) * cell_h; ++y)
              for (int xx = gx * cell_w; xx < (gx + 1) * cell_w; ++xx)
                sum += x.at(b, c, y, xx);
            f(b, (c * grid_ + gy) * grid_ + gx) = sum * inv;
          }
    return f;
  }

  /// Spreads feature gradients uniformly back over each pooled cell. Pure
  /// given the cached shape, so it doubles as the activation-gradient map.
  Tensor<S> backward(const Mat<S>& dfeat) const {
    if (dfeat.rows() != n_ || dfeat.cols() != out_dim(c_))
      throw std::invalid_argument("PooledTail: grad shape mismatch");
    const int cell_h = h_ / grid_, cell_w = w_ / grid_;
    const S inv = S(1) / static_cast<S>(cell_h * cell_w);
    Tensor<S> dx(n_, c_, h_, w_);
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < c_; ++c)
        for (int gy = 0; gy < grid_; ++gy)
          for (int gx = 0; gx < grid_; ++gx) {
            const S g = dfeat(b, (c * grid_ + gy) * grid_ + gx) * inv;
            for (int y = gy * cell_h; y < (gy + 1) * cell_h; ++y)
              for (int xx = gx * cell_w; xx < (gx + 1) * cell_w; ++xx)
                dx.at(b, c, y, xx) = g;
          }
    return dx;
  }

 private:
  int grid_ = 1;
  int n_ = 0, c_ = 0, h_ = 0, w_ = 0;
};

}  // namespace gssl::nn
