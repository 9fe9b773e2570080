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

#include "gssl/core/rng.hpp"
#include "gssl/core/tensor.hpp"
#include "gssl/nn/param.hpp"

namespace gssl::nn {

/// 2D convolution via per-image im2col and a GEMM. The input is cached and
/// the column matrix is rebuilt in backward, trading time for memory.
template <class S>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int in_channels, int out_channels, int kernel, int stride, int pad,
         bool bias = true)
      : cin_(in_channels), cout_(out_channels), k_(kernel), s_(stride),
        p_(pad), has_bias_(bias),
        w_(static_cast<std::size_t>(out_channels) * in_channels * kernel *
               kernel,
           S(0)),
        b_(bias ? out_channels : 0, S(0)), dw_(w_.size(), S(0)),
        db_(b_.size(), S(0)) {
    if (in_channels <= 0 || out_channels <= 0 || kernel <= 0 || stride <= 0 ||
        pad < 0)
      throw std::invalid_argument("Conv2d: bad hyperparameters");
  }

  static int out_dim(int in, int kernel, int stride, int pad) {
    return (in + 2 * pad - kernel) / stride + 1;
  }

  /// He-normal init, N(0, sqrt(2 / fan_in)).
  void init_he(Rng& rng) {
    const double std = std::sqrt(2.0 / (static_cast<double>(cin_) * k_ * k_));
    for (auto& v : w_) v = static_cast<S>(rng.normal(0.0, std));
    std::fill(b_.begin(), b_.end(), S(0));
  }

  Tensor<S> forward(const Tensor<S>& x) {
    if (x.c != cin_) throw std::invalid_argument("Conv2d: channel mismatch");
    x_ = x;
    const int ho = out_dim(x.h, k_, s_, p_), wo = out_dim(x.w, k_, s_, p_);
    if (ho <= 0 || wo <= 0)
      throw std::invalid_argument("Conv2d: output would be empty");
    Tensor<S> y(x.n, cout_, ho, wo);
    const int cols = ho * wo, rows = cin_ * k_ * k_;
    Mat<S> col(rows, cols);
    ConstMatMap<S> w(w_.data(), cout_, rows);
    for (int b = 0; b < x.n; ++b) {
      im2col(x, b, ho, wo, col);
      MatMap<S> yb(y.image_ptr(b), cout_, cols);
      yb.noalias() = w * col;
      if (has_bias_)
        for (int oc = 0; oc < cout_; ++oc) yb.row(oc).array() += b_[oc];
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& dy) {
    const int ho = dy.h, wo = dy.w;
    const int cols = ho * wo, rows = cin_ * k_ * k_;
    Tensor<S> dx(x_.n, x_.c, x_.h, x_.w);
    Mat<S> col(rows, cols), dcol(rows, cols);
    ConstMatMap<S> w(w_.data(), cout_, rows);
    MatMap<S> dw(dw_.data(), cout_, rows);
    for (int b = 0; b < x_.n; ++b) {
      ConstMatMap<S> dyb(dy.image_ptr(b), cout_, cols);
      im2col(x_, b, ho, wo, col);
      dw.noalias() += dyb * col.transpose();
      if (has_bias_)
        for (int oc = 0; oc < cout_; ++oc) db_[oc] += dyb.row(oc).sum();
      dcol.noalias() = w.transpose() * dyb;
      col2im_add(dcol, b, ho, wo, dx);
    }
    return dx;
  }

  void register_params(ParamRegistry<S>& reg, const std::string& prefix) {
    reg.add(prefix + ".weight", w_, dw_);
    if (has_bias_) reg.add(prefix + ".bias", b_, db_);
  }

  std::vector<S>& weight_data() { return w_; }
  int in_channels() const { return cin_; }
  int out_channels() const { return cout_; }

 private:
  void im2col(const Tensor<S>& x, int b, int ho, int wo, Mat<S>& col) const {
    for (int c = 0; c < cin_; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * s_ + ky - p_;
            S* dst = col.data() + (static_cast<std::size_t>(row) * ho + oy) * wo;
            if (iy < 0 || iy >= x.h) {
              std::fill(dst, dst + wo, S(0));
              continue;
            }
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = ox * s_ + kx - p_;
              dst[ox] = (ix >= 0 && ix < x.w) ? x.at(b, c, iy, ix) : S(0);
            }
          }
        }
  }

  void col2im_add(const Mat<S>& dcol, int b, int ho, int wo,
                  Tensor<S>& dx) const {
    for (int c = 0; c < cin_; ++c)
      for (int ky = 0; ky < k_; ++ky)
        for (int kx = 0; kx < k_; ++kx) {
          const int row = (c * k_ + ky) * k_ + kx;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * s_ + ky - p_;
            if (iy < 0 || iy >= dx.h) continue;
            const S* src =
                dcol.data() + (static_cast<std::size_t>(row) * ho + oy) * wo;
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = ox * s_ + kx - p_;
              if (ix >= 0 && ix < dx.w) dx.at(b, c, iy, ix) += src[ox];
            }
          }
        }
  }

  int cin_ = 0, cout_ = 0, k_ = 0, s_ = 1, p_ = 0;
  bool has_bias_ = true;
  std::vector<S> w_, b_, dw_, db_;
  Tensor<S> x_;
};

}  // namespace gssl::nn
