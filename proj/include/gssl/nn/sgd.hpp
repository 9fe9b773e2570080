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

#include "gssl/nn/param.hpp"

namespace gssl::nn {

/// SGD with momentum and L2 weight decay folded into the gradient:
///   v <- momentum * v + (g + wd * w);  w <- w - lr * v
template <class S>
class Sgd {
 public:
  Sgd(S lr, S momentum, S weight_decay)
      : lr_(lr), momentum_(momentum), wd_(weight_decay) {}

  void attach(ParamRegistry<S>& registry) {
    registry_ = &registry;
    velocity_.clear();
    for (const auto& e : registry.entries())
      velocity_.emplace_back(e.trainable ? e.value->size() : 0, S(0));
  }

  void set_lr(S lr) { lr_ = lr; }
  S lr() const { return lr_; }

  void zero_grad() {
    if (registry_) registry_->zero_grad();
  }

  void step() {
    if (!registry_) throw std::logic_error("Sgd: no registry attached");
    const auto& entries = registry_->entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (!entries[e].trainable) continue;
      auto& w = *entries[e].value;
      auto& g = *entries[e].grad;
      auto& v = velocity_[e];
      for (std::size_t i = 0; i < w.size(); ++i) {
        const S grad = g[i] + wd_ * w[i];
        v[i] = momentum_ * v[i] + grad;
        w[i] -= lr_ * v[i];
      }
    }
  }

 private:
  S lr_, momentum_, wd_;
  ParamRegistry<S>* registry_ = nullptr;
  std::vector<std::vector<S>> velocity_;
};

}  // namespace gssl::nn
