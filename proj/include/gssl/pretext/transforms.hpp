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

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gssl/core/rng.hpp"
#include "gssl/core/tensor.hpp"

namespace gssl::pretext {

/// The three quadrant-local transformation families. Each one is a pretext
/// task: the applied variant becomes a pseudo-label a dedicated head must
/// predict. Declaration order here is the canonical application order.
enum class TaskKind { LorotE = 0, HorizontalFlip = 1, ChannelPermutation = 2 };

struct PretextTask {
  TaskKind kind;
  int num_classes;  // fully determined by kind: 16, 2, 6

  static PretextTask make(TaskKind k) {
    switch (k) {
      case TaskKind::LorotE: return {k, 16};
      case TaskKind::HorizontalFlip: return {k, 2};
      case TaskKind::ChannelPermutation: return {k, 6};
    }
    throw std::invalid_argument("PretextTask: unknown kind");
  }
  static PretextTask lorot_e() { return make(TaskKind::LorotE); }
  static PretextTask flip() { return make(TaskKind::HorizontalFlip); }
  static PretextTask channel_perm() {
    return make(TaskKind::ChannelPermutation);
  }

  std::string_view name() const {
    switch (kind) {
      case TaskKind::LorotE: return "lorot_e";
      case TaskKind::HorizontalFlip: return "flip";
      case TaskKind::ChannelPermutation: return "channel_perm";
    }
    return "?";
  }
};

/// Parses a comma-separated task list ("lorot_e,flip,channel_perm") and
/// returns it in canonical order. Duplicates and unknown names are errors.
inline std::vector<PretextTask> parse_tasks(const std::string& text) {
  std::array<bool, 3> seen{false, false, false};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string name = text.substr(pos, comma - pos);
    // trim
    while (!name.empty() && (name.front() == ' ')) name.erase(name.begin());
    while (!name.empty() && (name.back() == ' ')) name.pop_back();
    if (!name.empty()) {
      int k;
      if (name == "lorot_e") k = 0;
      else if (name == "flip") k = 1;
      else if (name == "channel_perm") k = 2;
      else throw std::invalid_argument("unknown pretext task '" + name + "'");
      if (seen[k])
        throw std::invalid_argument("duplicate pretext task '" + name + "'");
      seen[k] = true;
    }
    pos = comma + 1;
  }
  std::vector<PretextTask> out;
  for (int k = 0; k < 3; ++k)
    if (seen[k]) out.push_back(PretextTask::make(static_cast<TaskKind>(k)));
  if (out.empty()) throw std::invalid_argument("no pretext tasks given");
  return out;
}

/// One of the four image quadrants. For an HxW image the split lines sit at
/// floor(H/2) and floor(W/2); the four regions partition the pixel grid
/// exactly, also for odd sizes.
struct Quadrant {
  int index = 0;  // 0 = top-left, 1 = top-right, 2 = bottom-left, 3 = bottom-right

  struct Rect {
    int y0, y1, x0, x1;  // half-open
    int height() const { return y1 - y0; }
    int width() const { return x1 - x0; }
  };

  Rect region(int h, int w) const {
    if (index < 0 || index > 3)
      throw std::invalid_argument("Quadrant: index must be in [0,4)");
    const int my = h / 2, mx = w / 2;
    const bool bottom = index >= 2;
    const bool right = (index % 2) == 1;
    return Rect{bottom ? my : 0, bottom ? h : my, right ? mx : 0,
                right ? w : mx};
  }
};

struct PseudoLabel {
  TaskKind task;
  int value;
};

/// One training sample after pretext transformation: the modified image plus
/// one pseudo-label per enabled task, in canonical task order.
template <class S>
struct TransformedSample {
  Image<S> image;
  int class_label = 0;
  std::vector<PseudoLabel> pseudo_labels;
};

/// The six permutations of (R,G,B) in lexicographic order. Entry p means:
/// output channel c reads input channel p[c].
inline constexpr std::array<std::array<int, 3>, 6> kChannelPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

/// Index of the permutation obtained by applying `first`, then `second`.
inline int compose_perms(int first, int second) {
  std::array<int, 3> composed{};
  for (int c = 0; c < 3; ++c)
    composed[c] = kChannelPerms[first][kChannelPerms[second][c]];
  for (int i = 0; i < 6; ++i)
    if (kChannelPerms[i] == composed) return i;
  throw std::logic_error("compose_perms: not a permutation");
}

namespace detail {

inline void check_min_size(const auto& img) {
  if (img.height < 2 || img.width < 2)
    throw std::invalid_argument(
        "pretext transform: image must be at least 2x2");
}

/// Rotates the quadrant `r` quarter turns counter-clockwise about its own
/// center. A non-square quadrant (odd image sizes only) is rotated and then
/// center-cropped or zero-padded back into its original rectangle, so pixels
/// outside the quadrant are never touched.
template <class S>
void rotate_quadrant(Image<S>& img, const Quadrant::Rect& rc, int r) {
  if (r == 0) return;
  const int qh = rc.height(), qw = rc.width();
  const int rh = (r % 2 == 1) ? qw : qh;
  const int rw = (r % 2 == 1) ? qh : qw;
  std::vector<S> rot(static_cast<std::size_t>(rh) * rw);
  for (int c = 0; c < img.channels; ++c) {
    // one quarter turn CCW: out(y, x) = in(x, w-1-y); iterate for r turns
    std::vector<S> cur(static_cast<std::size_t>(qh) * qw);
    for (int y = 0; y < qh; ++y)
      for (int x = 0; x < qw; ++x)
        cur[static_cast<std::size_t>(y) * qw + x] =
            img.at(c, rc.y0 + y, rc.x0 + x);
    int ch = qh, cw = qw;
    for (int step = 0; step < r; ++step) {
      std::vector<S> nxt(static_cast<std::size_t>(cw) * ch);
      for (int y = 0; y < cw; ++y)
        for (int x = 0; x < ch; ++x)
          nxt[static_cast<std::size_t>(y) * ch + x] =
              cur[static_cast<std::size_t>(x) * cw + (cw - 1 - y)];
      cur.swap(nxt);
      std::swap(ch, cw);
    }
    // ch x cw == rh x rw now; center-crop/zero-pad back to qh x qw
    const int copy_h = std::min(qh, rh), copy_w = std::min(qw, rw);
    const int src_oy = (rh - copy_h) / 2, src_ox = (rw - copy_w) / 2;
    const int dst_oy = (qh - copy_h) / 2, dst_ox = (qw - copy_w) / 2;
    for (int y = 0; y < qh; ++y)
      for (int x = 0; x < qw; ++x) img.at(c, rc.y0 + y, rc.x0 + x) = S(0);
    for (int y = 0; y < copy_h; ++y)
      for (int x = 0; x < copy_w; ++x)
        img.at(c, rc.y0 + dst_oy + y, rc.x0 + dst_ox + x) =
            cur[static_cast<std::size_t>(src_oy + y) * rw + (src_ox + x)];
  }
}

}  // namespace detail

/// Localizable rotation: rotates one quadrant by 90deg * rotation CCW.
/// Pseudo-label = 4 * quadrant + rotation, a bijection onto {0..15}.
template <class S>
std::pair<Image<S>, PseudoLabel> apply_lorot_e(const Image<S>& image,
                                               Quadrant quadrant,
                                               int rotation) {
  detail::check_min_size(image);
  if (rotation < 0 || rotation > 3)
    throw std::invalid_argument("apply_lorot_e: rotation must be in [0,4)");
  Image<S> out = image;
  const auto rc = quadrant.region(image.height, image.width);
  detail::rotate_quadrant(out, rc, rotation);
  return {std::move(out),
          PseudoLabel{TaskKind::LorotE, 4 * quadrant.index + rotation}};
}

/// Mirrors one quadrant left-right (across its vertical center line).
/// Pseudo-label is 1 when flipped, else 0; the quadrant is not encoded.
template <class S>
std::pair<Image<S>, PseudoLabel> apply_flip(const Image<S>& image,
                                            Quadrant quadrant, bool do_flip) {
  detail::check_min_size(image);
  Image<S> out = image;
  if (do_flip) {
    const auto rc = quadrant.region(image.height, image.width);
    const int qw = rc.width();
    for (int c = 0; c < out.channels; ++c)
      for (int y = rc.y0; y < rc.y1; ++y)
        for (int x = 0; x < qw / 2; ++x)
          std::swap(out.at(c, y, rc.x0 + x), out.at(c, y, rc.x1 - 1 - x));
  }
  return {std::move(out),
          PseudoLabel{TaskKind::HorizontalFlip, do_flip ? 1 : 0}};
}

/// Reorders the RGB channels of one quadrant by the perm_index-th
/// permutation of (R,G,B) in lexicographic order. Pseudo-label = perm_index.
template <class S>
std::pair<Image<S>, PseudoLabel> apply_channel_perm(const Image<S>& image,
                                                    Quadrant quadrant,
                                                    int perm_index) {
  detail::check_min_size(image);
  if (image.channels != 3)
    throw std::invalid_argument(
        "apply_channel_perm: image must have exactly 3 channels");
  if (perm_index < 0 || perm_index > 5)
    throw std::invalid_argument(
        "apply_channel_perm: perm_index must be in [0,6)");
  Image<S> out = image;
  const auto& perm = kChannelPerms[perm_index];
  const auto rc = quadrant.region(image.height, image.width);
  for (int c = 0; c < 3; ++c)
    for (int y = rc.y0; y < rc.y1; ++y)
      for (int x = rc.x0; x < rc.x1; ++x)
        out.at(c, y, x) = image.at(perm[c], y, x);
  return {std::move(out),
          PseudoLabel{TaskKind::ChannelPermutation, perm_index}};
}

/// Applies every enabled task to the same image, in canonical order, each
/// with its own independently sampled quadrant and parameter. Draw order per
/// task is fixed (quadrant first, then the task parameter) so a given rng
/// state always yields the same sample.
///
/// With probability 1 - probability the sample is left untouched and every
/// pseudo-label is 0 (the identity variant of each task).
template <class S>
TransformedSample<S> transform_sample(const Image<S>& image, int class_label,
                                      const std::vector<PretextTask>& tasks,
                                      Rng& rng, double probability = 1.0) {
  if (tasks.empty())
    throw std::invalid_argument("transform_sample: no tasks enabled");
  for (std::size_t i = 1; i < tasks.size(); ++i)
    if (static_cast<int>(tasks[i].kind) <= static_cast<int>(tasks[i - 1].kind))
      throw std::invalid_argument(
          "transform_sample: tasks must be distinct and in canonical order");

  TransformedSample<S> out;
  out.class_label = class_label;
  bool apply = true;
  if (probability < 1.0) apply = rng.uniform(0.0, 1.0) < probability;

  Image<S> img = image;
  for (const auto& task : tasks) {
    if (!apply) {
      out.pseudo_labels.push_back(PseudoLabel{task.kind, 0});
      continue;
    }
    const Quadrant quad{rng.below(4)};
    switch (task.kind) {
      case TaskKind::LorotE: {
        auto [next, label] = apply_lorot_e(img, quad, rng.below(4));
        img = std::move(next);
        out.pseudo_labels.push_back(label);
        break;
      }
      case TaskKind::HorizontalFlip: {
        auto [next, label] = apply_flip(img, quad, rng.below(2) == 1);
        img = std::move(next);
        out.pseudo_labels.push_back(label);
        break;
      }
      case TaskKind::ChannelPermutation: {
        auto [next, label] = apply_channel_perm(img, quad, rng.below(6));
        img = std::move(next);
        out.pseudo_labels.push_back(label);
        break;
      }
    }
  }
  out.image = std::move(img);
  return out;
}

}  // namespace gssl::pretext
