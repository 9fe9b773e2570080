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
#include <numbers>
#include <stdexcept>
#include <vector>

namespace gssl::train {

/// Closed-form learning-rate schedules.
///   step   - multiply by decay_factor at each 1-based epoch milestone
///   cosine - base_lr * cos(7 pi k / (16 K)) over 0-based steps k of horizon K
struct LrSchedule {
  enum class Kind { Step, Cosine };
  Kind kind = Kind::Step;
  double base_lr = 0.1;
  std::vector<long> milestones = {160, 180};
  double decay_factor = 0.01;
  long total_steps = 0;

  double epoch_lr(long epoch) const {
    if (kind != Kind::Step)
      throw std::logic_error("epoch_lr: schedule is not step-based");
    double lr = base_lr;
    for (long m : milestones)
      if (epoch >= m) lr *= decay_factor;
    return lr;
  }

  double iter_lr(long k) const {
    if (kind != Kind::Cosine)
      throw std::logic_error("iter_lr: schedule is not cosine-based");
    if (total_steps <= 0) throw std::logic_error("iter_lr: no horizon set");
    return base_lr * std::cos(7.0 * std::numbers::pi * static_cast<double>(k) /
                              (16.0 * static_cast<double>(total_steps)));
  }

  /// Dispatch used by the epoch-driven trainer: step schedules index by the
  /// 1-based epoch, cosine by the 0-based epoch over the epoch horizon.
  double lr_for_epoch(long epoch) const {
    return kind == Kind::Step ? epoch_lr(epoch) : iter_lr(epoch - 1);
  }
};

inline LrSchedule make_schedule(const std::string& kind, double base_lr,
                                const std::vector<long>& milestones,
                                double decay_factor, long total_steps) {
  LrSchedule s;
  s.base_lr = base_lr;
  s.milestones = milestones;
  s.decay_factor = decay_factor;
  s.total_steps = total_steps;
  if (kind == "step") s.kind = LrSchedule::Kind::Step;
  else if (kind == "cosine") s.kind = LrSchedule::Kind::Cosine;
  else throw std::invalid_argument("unknown schedule '" + kind + "'");
  return s;
}

}  // namespace gssl::train
