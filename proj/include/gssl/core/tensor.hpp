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

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace gssl {

/// Row-major dense matrix; the layout every buffer in this library maps to.
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class S>
using MatMap = Eigen::Map<Mat<S>>;

template <class S>
using ConstMatMap = Eigen::Map<const Mat<S>>;

/// Single image in CHW layout. Pixel values are expected in [0, 1] for
/// anything fed to a model, but the container itself does not enforce that.
template <class S>
struct Image {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<S> data;

  Image() = default;
  Image(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, S(0)) {
    if (c <= 0 || h <= 0 || w <= 0)
      throw std::invalid_argument("Image: dimensions must be positive");
  }

  S& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  const S& at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }

  std::size_t size() const { return data.size(); }
};

/// Batched NCHW tensor backed by one contiguous buffer.
template <class S>
struct Tensor {
  int n = 0, c = 0, h = 0, w = 0;
  std::vector<S> data;

  Tensor() = default;
  Tensor(int n_, int c_, int h_, int w_)
      : n(n_), c(c_), h(h_), w(w_),
        data(static_cast<std::size_t>(n_) * c_ * h_ * w_, S(0)) {
    if (n_ < 0 || c_ <= 0 || h_ <= 0 || w_ <= 0)
      throw std::invalid_argument("Tensor: bad dimensions");
  }

  std::size_t count() const { return data.size(); }
  std::size_t image_size() const { return static_cast<std::size_t>(c) * h * w; }

  S& at(int b, int ci, int y, int x) {
    return data[((static_cast<std::size_t>(b) * c + ci) * h + y) * w + x];
  }
  const S& at(int b, int ci, int y, int x) const {
    return data[((static_cast<std::size_t>(b) * c + ci) * h + y) * w + x];
  }

  S* image_ptr(int b) { return data.data() + b * image_size(); }
  const S* image_ptr(int b) const { return data.data() + b * image_size(); }

  void set_image(int b, const Image<S>& img) {
    if (img.channels != c || img.height != h || img.width != w)
      throw std::invalid_argument("Tensor::set_image: shape mismatch");
    std::copy(img.data.begin(), img.data.end(), image_ptr(b));
  }

  Image<S> image(int b) const {
    Image<S> out(c, h, w);
    std::copy(image_ptr(b), image_ptr(b) + image_size(), out.data.begin());
    return out;
  }

  /// View as an (n, c*h*w) matrix; rows are flattened images.
  MatMap<S> as_rows() {
    return MatMap<S>(data.data(), n, static_cast<Eigen::Index>(image_size()));
  }
  ConstMatMap<S> as_rows() const {
    return ConstMatMap<S>(data.data(), n,
                          static_cast<Eigen::Index>(image_size()));
  }
};

}  // namespace gssl
