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

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace gssl::nn {

/// Named view of one parameter (or stat buffer) owned by a layer.
/// Buffers (trainable == false) are serialized but never updated by the
/// optimizer, e.g. batch-norm running statistics.
template <class S>
struct ParamRef {
  std::string name;
  std::vector<S>* value = nullptr;
  std::vector<S>* grad = nullptr;  // null for buffers
  bool trainable = false;
};

template <class S>
class ParamRegistry {
 public:
  void add(std::string name, std::vector<S>& value, std::vector<S>& grad) {
    entries_.push_back({std::move(name), &value, &grad, true});
  }
  void add_buffer(std::string name, std::vector<S>& value) {
    entries_.push_back({std::move(name), &value, nullptr, false});
  }

  const std::vector<ParamRef<S>>& entries() const { return entries_; }

  std::size_t trainable_scalars() const {
    std::size_t total = 0;
    for (const auto& e : entries_)
      if (e.trainable) total += e.value->size();
    return total;
  }

  void zero_grad() {
    for (auto& e : entries_)
      if (e.grad) std::fill(e.grad->begin(), e.grad->end(), S(0));
  }

  const ParamRef<S>* find(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

 private:
  std::vector<ParamRef<S>> entries_;
};

}  // namespace gssl::nn
