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
#include <string>
#include <vector>

#include "gssl/core/tensor.hpp"
#include "gssl/nn/param.hpp"

namespace gssl::nn {

/// Per-channel batch normalization over (N, H, W). Training mode uses batch
/// statistics (biased variance) and updates running statistics with an
/// unbiased variance estimate; eval mode applies the running statistics as a
/// fixed affine transform.
template <class S>
class BatchNorm2d {
 public:
  BatchNorm2d() = default;
  explicit BatchNorm2d(int channels, S eps = S(1e-5), S momentum = S(0.1))
      : ch_(channels), eps_(eps), momentum_(momentum), gamma_(channels, S(1)),
        beta_(channels, S(0)), dgamma_(channels, S(0)), dbeta_(channels, S(0)),
        rmean_(channels, S(0)), rvar_(channels, S(1)) {
    if (channels <= 0) throw std::invalid_argument("BatchNorm2d: bad channels");
  }

  Tensor<S> forward(const Tensor<S>& x, bool train) {
    if (x.c != ch_) throw std::invalid_argument("BatchNorm2d: channel mismatch");
    train_mode_ = train;
    n_ = x.n; h_ = x.h; w_ = x.w;
    const std::size_t per = static_cast<std::size_t>(n_) * h_ * w_;
    Tensor<S> y(x.n, x.c, x.h, x.w);
    xhat_.resize(x.count());
    inv_std_.assign(ch_, S(0));
    for (int c = 0; c < ch_; ++c) {
      S mean, var;
      if (train) {
        S sum = 0, sq = 0;
        for (int b = 0; b < n_; ++b)
          for (int yy = 0; yy < h_; ++yy)
            for (int xx = 0; xx < w_; ++xx) {
              const S v = x.at(b, c, yy, xx);
              sum += v;
              sq += v * v;
            }
        mean = sum / static_cast<S>(per);
        var = sq / static_cast<S>(per) - mean * mean;
        if (var < S(0)) var = S(0);  // guard against cancellation
        rmean_[c] = (S(1) - momentum_) * rmean_[c] + momentum_ * mean;
        const S unbiased =
            per > 1 ? var * static_cast<S>(per) / static_cast<S>(per - 1) : var;
        rvar_[c] = (S(1) - momentum_) * rvar_[c] + momentum_ * unbiased;
      } else {
        mean = rmean_[c];
        var = rvar_[c];
      }
      const S inv = S(1) / std::sqrt(var + eps_);
      inv_std_[c] = inv;
      for (int b = 0; b < n_; ++b)
        for (int yy = 0; yy < h_; ++yy)
          for (int xx = 0; xx < w_; ++xx) {
            const S xh = (x.at(b, c, yy, xx) - mean) * inv;
            xhat_[index(b, c, yy, xx)] = xh;
            y.at(b, c, yy, xx) = gamma_[c] * xh + beta_[c];
          }
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& dy) {
    const std::size_t per = static_cast<std::size_t>(n_) * h_ * w_;
    Tensor<S> dx(dy.n, dy.c, dy.h, dy.w);
    for (int c = 0; c < ch_; ++c) {
      S sum_dy = 0, sum_dy_xhat = 0;
      for (int b = 0; b < n_; ++b)
        for (int yy = 0; yy < h_; ++yy)
          for (int xx = 0; xx < w_; ++xx) {
            const S g = dy.at(b, c, yy, xx);
            sum_dy += g;
            sum_dy_xhat += g * xhat_[index(b, c, yy, xx)];
          }
      dgamma_[c] += sum_dy_xhat;
      dbeta_[c] += sum_dy;
      const S scale = gamma_[c] * inv_std_[c];
      if (train_mode_) {
        const S inv_n = S(1) / static_cast<S>(per);
        for (int b = 0; b < n_; ++b)
          for (int yy = 0; yy < h_; ++yy)
            for (int xx = 0; xx < w_; ++xx) {
              const S g = dy.at(b, c, yy, xx);
              const S xh = xhat_[index(b, c, yy, xx)];
              dx.at(b, c, yy, xx) =
                  scale * (g - inv_n * sum_dy - xh * inv_n * sum_dy_xhat);
            }
      } else {
        for (int b = 0; b < n_; ++b)
          for (int yy = 0; yy < h_; ++yy)
            for (int xx = 0; xx < w_; ++xx)
              dx.at(b, c, yy, xx) = scale * dy.at(b, c, yy, xx);
      }
    }
    return dx;
  }

  void register_params(ParamRegistry<S>& reg, const std::string& prefix) {
    reg.add(prefix + ".gamma", gamma_, dgamma_);
    reg.add(prefix + ".beta", beta_, dbeta_);
    reg.add_buffer(prefix + ".running_mean", rmean_);
    reg.add_buffer(prefix + ".running_var", rvar_);
  }

  int channels() const { return ch_; }

 private:
  std::size_t index(int b, int c, int y, int x) const {
    return ((static_cast<std::size_t>(b) * ch_ + c) * h_ + y) * w_ + x;
  }

  int ch_ = 0;
  S eps_ = S(1e-5), momentum_ = S(0.1);
  std::vector<S> gamma_, beta_, dgamma_, dbeta_, rmean_, rvar_;
  bool train_mode_ = false;
  int n_ = 0, h_ = 0, w_ = 0;
  std::vector<S> xhat_, inv_std_;
};

}  // namespace gssl::nn
