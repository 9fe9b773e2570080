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

#include "gssl/core/tensor.hpp"
#include "gssl/nn/param.hpp"

namespace gssl::backbones {

/// Feature-extractor contract. forward() maps an image batch to pooled
/// feature vectors and retains the post-activation maps of the last
/// convolutional block, which class-activation analysis reads back.
///
/// forward/backward use internal scratch state and must not be called
/// concurrently on one instance; read-only evaluation of distinct instances
/// is safe.
template <class S>
class Backbone {
 public:
  virtual ~Backbone() = default;

  virtual int feature_dim() const = 0;

  /// (B, d) pooled features; caches everything backward() needs.
  virtual Mat<S> forward(const Tensor<S>& x, bool train) = 0;

  /// Backpropagates feature gradients through the whole stack, accumulating
  /// parameter gradients, and returns the input-pixel gradient.
  virtual Tensor<S> backward(const Mat<S>& dfeat) = 0;

  /// Last conv-block activation maps from the most recent forward().
  virtual const Tensor<S>& activations() const = 0;

  /// Gradient of a feature-space functional with respect to activations(),
  /// i.e. dfeat routed back through the pooling tail only. Does not touch
  /// parameter gradients.
  virtual Tensor<S> activation_gradient(const Mat<S>& dfeat) const = 0;

  virtual void register_params(nn::ParamRegistry<S>& reg,
                               const std::string& prefix) = 0;
};

/// Declarative backbone choice, parsed from config strings like "tiny",
/// "resnet32" or "wrn-40-2".
struct BackboneSpec {
  enum class Family { TinyCnn, ResNetCifar, WideResNet };
  Family family = Family::TinyCnn;
  int depth = 0;
  int width = 1;
  int input_size = 32;

  static BackboneSpec parse(const std::string& text, int input_size = 32) {
    BackboneSpec spec;
    spec.input_size = input_size;
    if (text == "tiny") {
      spec.family = Family::TinyCnn;
      return spec;
    }
    if (text.rfind("resnet", 0) == 0) {
      spec.family = Family::ResNetCifar;
      spec.depth = std::stoi(text.substr(6));
      return spec;
    }
    if (text.rfind("wrn-", 0) == 0) {
      spec.family = Family::WideResNet;
      const auto rest = text.substr(4);
      const auto dash = rest.find('-');
      if (dash == std::string::npos)
        throw std::invalid_argument("backbone: expected wrn-<depth>-<width>");
      spec.depth = std::stoi(rest.substr(0, dash));
      spec.width = std::stoi(rest.substr(dash + 1));
      return spec;
    }
    throw std::invalid_argument("unknown backbone '" + text + "'");
  }

  std::string to_string() const {
    switch (family) {
      case Family::TinyCnn: return "tiny";
      case Family::ResNetCifar: return "resnet" + std::to_string(depth);
      case Family::WideResNet:
        return "wrn-" + std::to_string(depth) + "-" + std::to_string(width);
    }
    return "?";
  }
};

}  // namespace gssl::backbones
