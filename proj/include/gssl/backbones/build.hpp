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

#include "gssl/backbones/backbone.hpp"
#include "gssl/backbones/resnet_cifar.hpp"
#include "gssl/backbones/tiny_cnn.hpp"
#include "gssl/backbones/wide_resnet.hpp"

namespace gssl::backbones {

/// Instantiates the backbone described by a spec. Initialization is fully
/// determined by the rng state.
template <class S>
std::unique_ptr<Backbone<S>> build_backbone(const BackboneSpec& spec,
                                            Rng& rng) {
  switch (spec.family) {
    case BackboneSpec::Family::TinyCnn:
      if (spec.input_size != 32 && spec.input_size != 64)
        throw std::invalid_argument("TinyCnn: input size must be 32 or 64");
      return std::make_unique<TinyCnn<S>>(spec.input_size, rng);
    case BackboneSpec::Family::ResNetCifar:
      return std::make_unique<ResNetCifar<S>>(spec.depth, spec.input_size,
                                              rng);
    case BackboneSpec::Family::WideResNet:
      return std::make_unique<WideResNet<S>>(spec.depth, spec.width,
                                             spec.input_size, rng);
  }
  throw std::invalid_argument("build_backbone: unknown family");
}

}  // namespace gssl::backbones
