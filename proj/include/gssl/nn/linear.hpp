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

/// Fully connected layer, y = x W^T + b. forward() caches its input for the
/// next backward(); eval() is the cache-free const path for inference.
template <class S>
class Linear {
 public:
  Linear() = default;
  Linear(int in_features, int out_features)
      : in_(in_features), out_(out_features),
        w_(static_cast<std::size_t>(in_features) * out_features, S(0)),
        b_(out_features, S(0)), dw_(w_.size(), S(0)), db_(b_.size(), S(0)) {
    if (in_features <= 0 || out_features <= 0)
      throw std::invalid_argument("Linear: dimensions must be positive");
  }

  int in_features() const { return in_; }
  int out_features() const { return out_; }

  /// Fan-in scaled uniform init, U(-1/sqrt(in), 1/sqrt(in)).
  void init_fan_in(Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_));
    for (auto& v : w_) v = static_cast<S>(rng.uniform(-bound, bound));
    for (auto& v : b_) v = static_cast<S>(rng.uniform(-bound, bound));
  }

  void init_zero() {
    std::fill(w_.begin(), w_.end(), S(0));
    std::fill(b_.begin(), b_.end(), S(0));
  }

  Mat<S> forward(const Mat<S>& x) {
    x_ = x;
    return eval(x);
  }

  /// Inference path; does not touch the backward cache.
  Mat<S> eval(const Mat<S>& x) const {
    if (x.cols() != in_) throw std::invalid_argument("Linear: input dim mismatch");
    ConstMatMap<S> w(w_.data(), out_, in_);
    Mat<S> y = x * w.transpose();
    ConstMatMap<S> b(b_.data(), 1, out_);
    y.rowwise() += b.row(0);
    return y;
  }

  /// Accumulates dW, db and returns dL/dx.
  Mat<S> backward(const Mat<S>& dy) {
    if (dy.rows() != x_.rows() || dy.cols() != out_)
      throw std::invalid_argument("Linear: grad shape mismatch");
    MatMap<S> dw(dw_.data(), out_, in_);
    dw.noalias() += dy.transpose() * x_;
    MatMap<S> db(db_.data(), 1, out_);
    db.row(0) += dy.colwise().sum();
    return backward_data(dy);
  }

  /// Input gradient only; leaves parameter gradients untouched.
  Mat<S> backward_data(const Mat<S>& dy) const {
    ConstMatMap<S> w(w_.data(), out_, in_);
    return dy * w;
  }

  void register_params(ParamRegistry<S>& reg, const std::string& prefix) {
    reg.add(prefix + ".weight", w_, dw_);
    reg.add(prefix + ".bias", b_, db_);
  }

  MatMap<S> weight() { return MatMap<S>(w_.data(), out_, in_); }
  ConstMatMap<S> weight() const { return ConstMatMap<S>(w_.data(), out_, in_); }
  std::vector<S>& bias() { return b_; }
  const std::vector<S>& bias() const { return b_; }

 private:
  int in_ = 0, out_ = 0;
  std::vector<S> w_, b_, dw_, db_;
  Mat<S> x_;
};

}  // namespace gssl::nn
