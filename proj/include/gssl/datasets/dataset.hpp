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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gssl/core/rng.hpp"
#include "gssl/core/tensor.hpp"

namespace gssl::datasets {

/// In-memory image classification dataset; pixels kept as bytes in CHW
/// plane order, exactly as the binary distribution files store them.
struct Dataset {
  int num_classes = 10;
  int height = 32;
  int width = 32;
  std::vector<std::uint8_t> pixels;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t image_bytes() const {
    return static_cast<std::size_t>(3) * height * width;
  }
  const std::uint8_t* raw(std::size_t i) const {
    return pixels.data() + i * image_bytes();
  }

  template <class S>
  Image<S> image(std::size_t i) const {
    Image<S> img(3, height, width);
    const std::uint8_t* src = raw(i);
    for (std::size_t k = 0; k < img.data.size(); ++k)
      img.data[k] = static_cast<S>(src[k]) / S(255);
    return img;
  }
};

/// FNV-1a 64-bit over a whole file; recorded in run manifests so a run
/// pins down the exact dataset bytes it saw.
inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<std::uint8_t>(buf[i]);
      hash *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  return hash;
}

struct DataBundle {
  Dataset train;
  Dataset test;
  std::vector<std::string> files;
  std::vector<std::uint64_t> checksums;
};

namespace detail {

inline void read_records(const std::string& path, int label_bytes,
                         int image_bytes, Dataset& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("dataset: cannot open " + path);
  const auto record = static_cast<std::size_t>(label_bytes) + image_bytes;
  in.seekg(0, std::ios::end);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  if (file_size == 0 || file_size % record != 0)
    throw std::runtime_error("dataset: " + path + " has a partial record");
  const std::size_t count = file_size / record;
  std::vector<std::uint8_t> rec(record);
  for (std::size_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(rec.data()),
            static_cast<std::streamsize>(record));
    // multi-byte labels keep only the last (fine label) byte
    out.labels.push_back(rec[label_bytes - 1]);
    out.pixels.insert(out.pixels.end(), rec.begin() + label_bytes, rec.end());
  }
}

inline std::string resolve_dir(const std::string& root,
                               const std::string& subdir,
                               const std::string& probe) {
  namespace fs = std::filesystem;
  if (fs::exists(fs::path(root) / probe)) return root;
  const auto nested = fs::path(root) / subdir;
  if (fs::exists(nested / probe)) return nested.string();
  throw std::runtime_error("dataset: '" + probe + "' not found under " + root);
}

}  // namespace detail

/// Loads a dataset in one of the supported binary layouts:
///   cifar10  - data_batch_*.bin / test_batch.bin, 1 label byte + 3072 px
///   cifar100 - train.bin / test.bin, 2 label bytes (coarse, fine) + 3072 px
///   bin64    - train.bin / test.bin, 1 label byte + 3*64*64 px
inline DataBundle load_dataset(const std::string& root,
                               const std::string& kind) {
  namespace fs = std::filesystem;
  DataBundle bundle;
  auto add_file = [&](Dataset& ds, const std::string& path, int label_bytes,
                      int image_bytes) {
    detail::read_records(path, label_bytes, image_bytes, ds);
    bundle.files.push_back(path);
    bundle.checksums.push_back(fnv1a64_file(path));
  };

  if (kind == "cifar10") {
    const auto dir =
        detail::resolve_dir(root, "cifar-10-batches-bin", "data_batch_1.bin");
    bundle.train.num_classes = bundle.test.num_classes = 10;
    for (int b = 1; b <= 5; ++b) {
      const auto path =
          (fs::path(dir) / ("data_batch_" + std::to_string(b) + ".bin"))
              .string();
      if (!fs::exists(path)) continue;
      add_file(bundle.train, path, 1, 3072);
    }
    add_file(bundle.test, (fs::path(dir) / "test_batch.bin").string(), 1,
             3072);
  } else if (kind == "cifar100") {
    const auto dir = detail::resolve_dir(root, "cifar-100-binary", "train.bin");
    bundle.train.num_classes = bundle.test.num_classes = 100;
    add_file(bundle.train, (fs::path(dir) / "train.bin").string(), 2, 3072);
    add_file(bundle.test, (fs::path(dir) / "test.bin").string(), 2, 3072);
  } else if (kind == "bin64") {
    const auto dir = detail::resolve_dir(root, "bin64", "train.bin");
    bundle.train.num_classes = bundle.test.num_classes = 10;
    bundle.train.height = bundle.train.width = 64;
    bundle.test.height = bundle.test.width = 64;
    add_file(bundle.train, (fs::path(dir) / "train.bin").string(), 1,
             3 * 64 * 64);
    add_file(bundle.test, (fs::path(dir) / "test.bin").string(), 1,
             3 * 64 * 64);
  } else {
    throw std::invalid_argument("dataset: unknown kind '" + kind + "'");
  }
  if (bundle.train.size() == 0)
    throw std::runtime_error("dataset: empty train set under " + root);
  return bundle;
}

/// Writes a synthetic dataset in the chosen binary layout. Images carry a
/// global diagonal luminance ramp, a class-specific stripe pattern and a
/// fixed channel-intensity ordering, so both the class label and each
/// quadrant transformation stay decodable. Intended as a stand-in fixture
/// when the real archives are not on disk.
inline void write_synthetic(const std::string& root, const std::string& kind,
                            int n_train, int n_test, int num_classes,
                            std::uint64_t seed) {
  namespace fs = std::filesystem;
  if (kind != "cifar10" && kind != "bin64")
    throw std::invalid_argument("synthetic data: kind must be cifar10|bin64");
  const int side = kind == "bin64" ? 64 : 32;
  fs::create_directories(root);

  auto render = [&](std::ofstream& out, int index, int klass) {
    Rng rng = Rng::derive(seed, (static_cast<std::uint64_t>(index) << 7) ^
                                    static_cast<std::uint64_t>(klass));
    const double phi = 2.0 * std::numbers::pi * klass / num_classes;
    const double freq = 1.5 + (klass % 5);
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    std::vector<std::uint8_t> planes(static_cast<std::size_t>(3) * side * side);
    const double gain[3] = {0.85, 0.60, 0.35};
    const double base[3] = {0.15, 0.10, 0.05};
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        const double ramp = static_cast<double>(x + y) / (2 * side - 2);
        const double stripe =
            0.5 + 0.5 * std::sin(2.0 * std::numbers::pi * freq *
                                 (cphi * x + sphi * y) / side);
        const double v = 0.55 * ramp + 0.45 * stripe;
        for (int c = 0; c < 3; ++c) {
          double px = base[c] + gain[c] * v + rng.uniform(-0.04, 0.04);
          px = std::min(1.0, std::max(0.0, px));
          planes[(static_cast<std::size_t>(c) * side + y) * side + x] =
              static_cast<std::uint8_t>(std::lround(px * 255.0));
        }
      }
    const auto label = static_cast<char>(klass);
    out.write(&label, 1);
    out.write(reinterpret_cast<const char*>(planes.data()),
              static_cast<std::streamsize>(planes.size()));
  };

  auto write_file = [&](const std::string& path, int count, int offset) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("synthetic data: cannot write " + path);
    for (int i = 0; i < count; ++i)
      render(out, offset + i, (offset + i) % num_classes);
  };

  if (kind == "cifar10") {
    write_file((fs::path(root) / "data_batch_1.bin").string(), n_train, 0);
    write_file((fs::path(root) / "test_batch.bin").string(), n_test, n_train);
  } else {
    write_file((fs::path(root) / "train.bin").string(), n_train, 0);
    write_file((fs::path(root) / "test.bin").string(), n_test, n_train);
  }
}

enum class SplitRole { Train, Val, Test, Unlabeled };

inline const char* role_name(SplitRole role) {
  switch (role) {
    case SplitRole::Train: return "train";
    case SplitRole::Val: return "val";
    case SplitRole::Test: return "test";
    case SplitRole::Unlabeled: return "unlabeled";
  }
  return "?";
}

/// Immutable view of a dataset subset: a list of indices plus per-class
/// index lists. Unlabeled splits keep indices only; their labels are
/// considered hidden by convention.
struct DatasetSplit {
  const Dataset* base = nullptr;
  SplitRole role = SplitRole::Train;
  std::vector<int> indices;
  std::vector<std::vector<int>> by_class;

  std::size_t size() const { return indices.size(); }
  int label(std::size_t j) const { return base->labels[indices[j]]; }

  static DatasetSplit full(const Dataset& ds, SplitRole role) {
    DatasetSplit split;
    split.base = &ds;
    split.role = role;
    split.indices.resize(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
      split.indices[i] = static_cast<int>(i);
    split.rebuild_by_class();
    return split;
  }

  void rebuild_by_class() {
    by_class.assign(base->num_classes, {});
    for (int idx : indices) {
      const int label = base->labels[idx];
      if (label < 0 || label >= base->num_classes)
        throw std::runtime_error("split: label out of range");
      by_class[label].push_back(idx);
    }
  }

  DatasetSplit take_prefix(std::size_t count, SplitRole new_role) const {
    DatasetSplit out;
    out.base = base;
    out.role = new_role;
    out.indices.assign(indices.begin(),
                       indices.begin() + std::min(count, indices.size()));
    out.rebuild_by_class();
    return out;
  }
};

/// Split manifest: one "index class" line per sample, so any selection is
/// reproducible from the file alone.
inline void write_split_manifest(const DatasetSplit& split,
                                 const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write split manifest " + path);
  out << "# gssl split manifest: index class\n";
  out << "# role " << role_name(split.role) << "\n";
  for (std::size_t j = 0; j < split.size(); ++j)
    out << split.indices[j] << " " << split.label(j) << "\n";
}

inline DatasetSplit split_from_manifest(const Dataset& ds,
                                        const std::string& path,
                                        SplitRole role) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open split manifest " + path);
  DatasetSplit split;
  split.base = &ds;
  split.role = role;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::size_t sep = line.find(' ');
    const int idx = std::stoi(line.substr(0, sep));
    const int label = std::stoi(line.substr(sep + 1));
    if (idx < 0 || static_cast<std::size_t>(idx) >= ds.size())
      throw std::runtime_error("split manifest: index out of range");
    if (ds.labels[idx] != label)
      throw std::runtime_error("split manifest: label mismatch at index " +
                               std::to_string(idx));
    split.indices.push_back(idx);
  }
  split.rebuild_by_class();
  return split;
}

}  // namespace gssl::datasets
