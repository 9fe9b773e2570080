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

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gssl/backbones/build.hpp"
#include "gssl/gatenet/model.hpp"

namespace gssl::gatenet {

/// Everything needed to rebuild a model around a parameter blob. Written as
/// a plain-text sidecar next to the checkpoint so checkpoints stay
/// self-describing.
struct CheckpointMeta {
  backbones::BackboneSpec backbone;
  int q = 0;
  std::vector<pretext::PretextTask> tasks;
  bool gated = true;
  double lambda = 0.1;
};

namespace detail {

inline constexpr char kMagic[8] = {'G', 'S', 'S', 'L', 'C', 'K', 'P', '1'};

inline std::string sidecar_path(const std::string& ckpt_path) {
  return ckpt_path + ".manifest";
}

template <class T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T read_raw(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace detail

template <class S>
void save_checkpoint(GatedModel<S>& model, const CheckpointMeta& meta,
                     const std::string& path) {
  nn::ParamRegistry<S> reg;
  model.register_params(reg);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  out.write(detail::kMagic, sizeof(detail::kMagic));
  detail::write_raw<std::uint32_t>(out, sizeof(S));
  detail::write_raw<std::uint64_t>(out, reg.entries().size());
  for (const auto& e : reg.entries()) {
    detail::write_raw<std::uint32_t>(
        out, static_cast<std::uint32_t>(e.name.size()));
    out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
    detail::write_raw<std::uint64_t>(out, e.value->size());
    out.write(reinterpret_cast<const char*>(e.value->data()),
              static_cast<std::streamsize>(e.value->size() * sizeof(S)));
  }
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
  out.close();

  std::ofstream side(detail::sidecar_path(path), std::ios::trunc);
  if (!side)
    throw std::runtime_error("checkpoint: cannot write sidecar for " + path);
  side << "format=gssl-checkpoint-v1\n";
  side << "backbone=" << meta.backbone.to_string() << "\n";
  side << "input_size=" << meta.backbone.input_size << "\n";
  side << "q=" << meta.q << "\n";
  side << "d=" << model.feature_dim() << "\n";
  side << "t=" << model.num_tasks() << "\n";
  side << "tasks=";
  for (int n = 0; n < model.num_tasks(); ++n)
    side << (n ? "," : "") << model.tasks()[n].name();
  side << "\n";
  side << "gated=" << (meta.gated ? "true" : "false") << "\n";
  side << "lambda=" << meta.lambda << "\n";
  side << "scalar=" << (sizeof(S) == 4 ? "float32" : "float64") << "\n";
}

inline CheckpointMeta read_checkpoint_meta(const std::string& path) {
  std::ifstream side(detail::sidecar_path(path));
  if (!side)
    throw std::runtime_error("checkpoint: missing sidecar manifest for " +
                             path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(side, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (kv["format"] != "gssl-checkpoint-v1")
    throw std::runtime_error("checkpoint: unsupported format");
  CheckpointMeta meta;
  meta.backbone =
      backbones::BackboneSpec::parse(kv.at("backbone"),
                                     std::stoi(kv.at("input_size")));
  meta.q = std::stoi(kv.at("q"));
  meta.tasks = pretext::parse_tasks(kv.at("tasks"));
  meta.gated = kv.at("gated") == "true";
  meta.lambda = std::stod(kv.at("lambda"));
  return meta;
}

/// Rebuilds the model described by the sidecar and loads every parameter and
/// stat buffer bit-exactly.
template <class S>
GatedModel<S> load_checkpoint(const std::string& path,
                              CheckpointMeta* meta_out = nullptr) {
  const CheckpointMeta meta = read_checkpoint_meta(path);
  Rng init_rng(0);  // immediately overwritten by the stored parameters
  GatedModel<S> model =
      build_model<S>(backbones::build_backbone<S>(meta.backbone, init_rng),
                     meta.q, meta.tasks, meta.gated, init_rng);
  nn::ParamRegistry<S> reg;
  model.register_params(reg);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + 8, detail::kMagic))
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const auto scalar_size = detail::read_raw<std::uint32_t>(in);
  if (scalar_size != sizeof(S))
    throw std::runtime_error("checkpoint: scalar type mismatch");
  const auto entries = detail::read_raw<std::uint64_t>(in);
  std::size_t loaded = 0;
  for (std::uint64_t e = 0; e < entries; ++e) {
    const auto name_len = detail::read_raw<std::uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto count = detail::read_raw<std::uint64_t>(in);
    const auto* ref = reg.find(name);
    if (!ref || ref->value->size() != count)
      throw std::runtime_error("checkpoint: unexpected entry '" + name + "'");
    in.read(reinterpret_cast<char*>(ref->value->data()),
            static_cast<std::streamsize>(count * sizeof(S)));
    if (!in) throw std::runtime_error("checkpoint: truncated entry " + name);
    ++loaded;
  }
  if (loaded != reg.entries().size())
    throw std::runtime_error("checkpoint: missing entries in " + path);
  if (meta_out) *meta_out = meta;
  return model;
}

}  // namespace gssl::gatenet
