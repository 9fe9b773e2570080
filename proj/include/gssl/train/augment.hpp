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
#include <cmath>

#include "gssl/core/rng.hpp"
#include "gssl/core/tensor.hpp"

namespace gssl::train {

/// Zero-pads by `pad` on every side and takes a random crop back to the
/// original size. Draw order: y offset, then x offset.
template <class S>
Image<S> random_pad_crop(const Image<S>& img, int pad, Rng& rng) {
  const int oy = rng.below(2 * pad + 1);
  const int ox = rng.below(2 * pad + 1);
  Image<S> out(img.channels, img.height, img.width);
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        const int sy = y + oy - pad, sx = x + ox - pad;
        out.at(c, y, x) = (sy >= 0 && sy < img.height && sx >= 0 &&
                           sx < img.width)
                              ? img.at(c, sy, sx)
                              : S(0);
      }
  return out;
}

template <class S>
void flip_horizontal(Image<S>& img) {
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width / 2; ++x)
        std::swap(img.at(c, y, x), img.at(c, y, img.width - 1 - x));
}

/// Standard weak policy: pad-4 random crop plus coin-flip horizontal mirror.
template <class S>
Image<S> base_augment(const Image<S>& img, Rng& rng) {
  Image<S> out = random_pad_crop(img, 4, rng);
  if (rng.below(2) == 1) flip_horizontal(out);
  return out;
}

struct StrongAugCfg {
  double jitter = 0.4;       // brightness/contrast/saturation amplitude
  double grayscale_p = 0.2;  // probability of dropping color
  int cutout = 16;           // side length of the erased square, 0 = off
};

/// Fixed small strong policy: color jitter, random grayscale, cutout. Values
/// are clamped back to [0, 1]. Draw order: brightness, contrast, saturation,
/// grayscale coin, cutout center (y, x).
template <class S>
Image<S> strong_augment(const Image<S>& img, const StrongAugCfg& cfg,
                        Rng& rng) {
  Image<S> out = img;
  const double jb = rng.uniform(1.0 - cfg.jitter, 1.0 + cfg.jitter);
  const double jc = rng.uniform(1.0 - cfg.jitter, 1.0 + cfg.jitter);
  const double js = rng.uniform(1.0 - cfg.jitter, 1.0 + cfg.jitter);
  const bool to_gray = rng.uniform(0.0, 1.0) < cfg.grayscale_p;

  double mean = 0;
  for (const S v : out.data) mean += static_cast<double>(v);
  mean /= static_cast<double>(out.data.size());

  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      double px[3];
      for (int c = 0; c < out.channels; ++c)
        px[c] = static_cast<double>(out.at(c, y, x)) * jb;
      for (int c = 0; c < out.channels; ++c)
        px[c] = mean + (px[c] - mean) * jc;
      if (out.channels == 3) {
        const double gray = (px[0] + px[1] + px[2]) / 3.0;
        for (int c = 0; c < 3; ++c)
          px[c] = to_gray ? gray : gray + (px[c] - gray) * js;
      }
      for (int c = 0; c < out.channels; ++c)
        out.at(c, y, x) = static_cast<S>(std::clamp(px[c], 0.0, 1.0));
    }

  if (cfg.cutout > 0) {
    const int cy = rng.below(out.height);
    const int cx = rng.below(out.width);
    const int half = cfg.cutout / 2;
    for (int c = 0; c < out.channels; ++c)
      for (int y = std::max(0, cy - half);
           y < std::min(out.height, cy + half); ++y)
        for (int x = std::max(0, cx - half);
             x < std::min(out.width, cx + half); ++x)
          out.at(c, y, x) = S(0.5);
  }
  return out;
}

}  // namespace gssl::train
