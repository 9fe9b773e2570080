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
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gssl/pretext/transforms.hpp"

namespace gssl::train {

/// Configuration problem tied to a specific key. The CLI maps these to
/// exit code 2 and prints the offending key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

using ConfigMap = std::map<std::string, std::string>;

/// Flat key=value file; '#' starts a comment, blank lines are ignored.
inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ConfigMap out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    if (out.count(key)) throw ConfigError("duplicate config key '" + key + "'");
    out[key] = value;
  }
  return out;
}

/// Every tunable of every run mode, resolved with defaults. Unknown keys are
/// rejected by name; mode-specific keys are namespaced by prefix.
struct RunConfig {
  std::uint64_t seed = 1;

  // dataset.*
  std::string dataset_root;
  std::string dataset_kind = "cifar10";
  double imbalance_rho = 1.0;
  std::uint64_t imbalance_seed = 12061;
  std::string split_manifest;
  int train_limit = 0;  // 0 = all
  int val_limit = 0;

  // model.* and the shared objective knobs
  std::string backbone = "tiny";
  std::string tasks_text = "lorot_e,flip,channel_perm";
  std::vector<pretext::PretextTask> tasks =
      pretext::parse_tasks("lorot_e,flip,channel_perm");
  bool gated = true;
  double ssl_ratio = 0.1;
  double transform_prob = 1.0;
  bool base_augment = true;

  // train.*
  int epochs = 5;
  int batch_size = 128;
  double lr = 0.1;
  double momentum = 0.9;
  double weight_decay = 2e-4;
  std::string schedule = "step";  // step | cosine
  std::vector<long> milestones = {160, 180};
  double decay_factor = 0.01;
  std::string objective = "ce";  // ce | ldam-drw

  // ldam.*
  double ldam_max_margin = 0.5;
  double ldam_scale = 30.0;
  int ldam_drw_epoch = 160;
  double ldam_beta = 0.9999;

  // pgd.*
  double pgd_eps = 8.0 / 255.0;
  double pgd_alpha = 2.0 / 255.0;
  int pgd_steps = 10;
  bool pgd_random_start = true;

  // fixmatch.*
  double fm_tau = 0.95;
  double fm_lambda_u = 1.0;
  int fm_mu = 7;
  double fm_lambda_ssl = 0.3;
  long fm_iterations = 1 << 20;
  long fm_eval_every = 1024;
  int fm_num_labeled = 4000;
  bool fm_ema = false;
  double fm_ema_decay = 0.999;
  double fm_jitter = 0.4;
  double fm_grayscale_p = 0.2;
  int fm_cutout = 16;

  static RunConfig from_map(const ConfigMap& map);
  ConfigMap to_map() const;
  void validate() const;
};

namespace detail {

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + v);
}

template <class T>
T parse_num(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T out;
  in >> out;
  if (!in || !in.eof())
    throw ConfigError("invalid value for '" + key + "': " + v);
  return out;
}

/// Accepts plain decimals and exact fractions like "8/255".
inline double parse_ratio(const std::string& key, const std::string& v) {
  const auto slash = v.find('/');
  if (slash == std::string::npos) return parse_num<double>(key, v);
  const double num = parse_num<double>(key, v.substr(0, slash));
  const double den = parse_num<double>(key, v.substr(slash + 1));
  if (den == 0.0) throw ConfigError("division by zero in '" + key + "'");
  return num / den;
}

inline std::vector<long> parse_long_list(const std::string& key,
                                         const std::string& v) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    auto comma = v.find(',', pos);
    if (comma == std::string::npos) comma = v.size();
    const auto item = v.substr(pos, comma - pos);
    if (!item.empty()) out.push_back(parse_num<long>(key, item));
    pos = comma + 1;
  }
  return out;
}

}  // namespace detail

inline RunConfig RunConfig::from_map(const ConfigMap& map) {
  RunConfig cfg;
  std::set<std::string> known;
  auto handle = [&](const std::string& key, auto&& setter) {
    known.insert(key);
    const auto it = map.find(key);
    if (it != map.end()) setter(it->second);
  };

  using detail::parse_bool;
  using detail::parse_num;
  using detail::parse_ratio;

  handle("seed", [&](const std::string& v) {
    cfg.seed = parse_num<std::uint64_t>("seed", v);
  });
  handle("dataset.root", [&](const std::string& v) { cfg.dataset_root = v; });
  handle("dataset.kind", [&](const std::string& v) { cfg.dataset_kind = v; });
  handle("dataset.imbalance_rho", [&](const std::string& v) {
    cfg.imbalance_rho = parse_num<double>("dataset.imbalance_rho", v);
  });
  handle("dataset.imbalance_seed", [&](const std::string& v) {
    cfg.imbalance_seed = parse_num<std::uint64_t>("dataset.imbalance_seed", v);
  });
  handle("dataset.split_manifest",
         [&](const std::string& v) { cfg.split_manifest = v; });
  handle("dataset.train_limit", [&](const std::string& v) {
    cfg.train_limit = parse_num<int>("dataset.train_limit", v);
  });
  handle("dataset.val_limit", [&](const std::string& v) {
    cfg.val_limit = parse_num<int>("dataset.val_limit", v);
  });
  handle("model.backbone", [&](const std::string& v) { cfg.backbone = v; });
  handle("tasks", [&](const std::string& v) {
    cfg.tasks_text = v;
    try {
      cfg.tasks = pretext::parse_tasks(v);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(std::string("invalid value for 'tasks': ") +
                        err.what());
    }
  });
  handle("gated",
         [&](const std::string& v) { cfg.gated = parse_bool("gated", v); });
  handle("ssl_ratio", [&](const std::string& v) {
    cfg.ssl_ratio = parse_num<double>("ssl_ratio", v);
  });
  handle("transform_prob", [&](const std::string& v) {
    cfg.transform_prob = parse_num<double>("transform_prob", v);
  });
  handle("augment.base", [&](const std::string& v) {
    cfg.base_augment = parse_bool("augment.base", v);
  });
  handle("train.epochs", [&](const std::string& v) {
    cfg.epochs = parse_num<int>("train.epochs", v);
  });
  handle("train.batch_size", [&](const std::string& v) {
    cfg.batch_size = parse_num<int>("train.batch_size", v);
  });
  handle("train.lr", [&](const std::string& v) {
    cfg.lr = parse_num<double>("train.lr", v);
  });
  handle("train.momentum", [&](const std::string& v) {
    cfg.momentum = parse_num<double>("train.momentum", v);
  });
  handle("train.weight_decay", [&](const std::string& v) {
    cfg.weight_decay = parse_num<double>("train.weight_decay", v);
  });
  handle("train.schedule", [&](const std::string& v) { cfg.schedule = v; });
  handle("train.milestones", [&](const std::string& v) {
    cfg.milestones = detail::parse_long_list("train.milestones", v);
  });
  handle("train.decay_factor", [&](const std::string& v) {
    cfg.decay_factor = parse_num<double>("train.decay_factor", v);
  });
  handle("train.objective", [&](const std::string& v) { cfg.objective = v; });
  handle("ldam.max_margin", [&](const std::string& v) {
    cfg.ldam_max_margin = parse_num<double>("ldam.max_margin", v);
  });
  handle("ldam.scale", [&](const std::string& v) {
    cfg.ldam_scale = parse_num<double>("ldam.scale", v);
  });
  handle("ldam.drw_epoch", [&](const std::string& v) {
    cfg.ldam_drw_epoch = parse_num<int>("ldam.drw_epoch", v);
  });
  handle("ldam.beta", [&](const std::string& v) {
    cfg.ldam_beta = parse_num<double>("ldam.beta", v);
  });
  handle("pgd.eps", [&](const std::string& v) {
    cfg.pgd_eps = parse_ratio("pgd.eps", v);
  });
  handle("pgd.alpha", [&](const std::string& v) {
    cfg.pgd_alpha = parse_ratio("pgd.alpha", v);
  });
  handle("pgd.steps", [&](const std::string& v) {
    cfg.pgd_steps = parse_num<int>("pgd.steps", v);
  });
  handle("pgd.random_start", [&](const std::string& v) {
    cfg.pgd_random_start = parse_bool("pgd.random_start", v);
  });
  handle("fixmatch.tau", [&](const std::string& v) {
    cfg.fm_tau = parse_num<double>("fixmatch.tau", v);
  });
  handle("fixmatch.lambda_u", [&](const std::string& v) {
    cfg.fm_lambda_u = parse_num<double>("fixmatch.lambda_u", v);
  });
  handle("fixmatch.mu", [&](const std::string& v) {
    cfg.fm_mu = parse_num<int>("fixmatch.mu", v);
  });
  handle("fixmatch.lambda_ssl", [&](const std::string& v) {
    cfg.fm_lambda_ssl = parse_num<double>("fixmatch.lambda_ssl", v);
  });
  handle("fixmatch.iterations", [&](const std::string& v) {
    cfg.fm_iterations = parse_num<long>("fixmatch.iterations", v);
  });
  handle("fixmatch.eval_every", [&](const std::string& v) {
    cfg.fm_eval_every = parse_num<long>("fixmatch.eval_every", v);
  });
  handle("fixmatch.num_labeled", [&](const std::string& v) {
    cfg.fm_num_labeled = parse_num<int>("fixmatch.num_labeled", v);
  });
  handle("fixmatch.ema", [&](const std::string& v) {
    cfg.fm_ema = parse_bool("fixmatch.ema", v);
  });
  handle("fixmatch.ema_decay", [&](const std::string& v) {
    cfg.fm_ema_decay = parse_num<double>("fixmatch.ema_decay", v);
  });
  handle("fixmatch.jitter", [&](const std::string& v) {
    cfg.fm_jitter = parse_num<double>("fixmatch.jitter", v);
  });
  handle("fixmatch.grayscale_p", [&](const std::string& v) {
    cfg.fm_grayscale_p = parse_num<double>("fixmatch.grayscale_p", v);
  });
  handle("fixmatch.cutout", [&](const std::string& v) {
    cfg.fm_cutout = parse_num<int>("fixmatch.cutout", v);
  });

  for (const auto& [key, value] : map)
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  cfg.validate();
  return cfg;
}

inline void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (dataset_kind != "cifar10" && dataset_kind != "cifar100" &&
      dataset_kind != "bin64")
    fail("invalid value for 'dataset.kind': " + dataset_kind);
  if (!(imbalance_rho > 0.0) || imbalance_rho > 1.0)
    fail("'dataset.imbalance_rho' must be in (0, 1]");
  if (ssl_ratio < 0.0) fail("'ssl_ratio' must be >= 0");
  if (transform_prob < 0.0 || transform_prob > 1.0)
    fail("'transform_prob' must be in [0, 1]");
  if (epochs < 1) fail("'train.epochs' must be >= 1");
  if (batch_size < 1) fail("'train.batch_size' must be >= 1");
  if (schedule != "step" && schedule != "cosine")
    fail("invalid value for 'train.schedule': " + schedule);
  for (std::size_t i = 1; i < milestones.size(); ++i)
    if (milestones[i] <= milestones[i - 1])
      fail("'train.milestones' must be strictly increasing");
  if (objective != "ce" && objective != "ldam-drw")
    fail("invalid value for 'train.objective': " + objective);
  if (!(pgd_eps > 0.0)) fail("'pgd.eps' must be > 0");
  if (!(pgd_alpha > 0.0)) fail("'pgd.alpha' must be > 0");
  if (pgd_steps < 0) fail("'pgd.steps' must be >= 0");
  if (!(fm_tau > 0.0) || fm_tau > 1.0) fail("'fixmatch.tau' must be in (0, 1]");
  if (fm_mu < 1) fail("'fixmatch.mu' must be >= 1");
  if (fm_lambda_u < 0.0) fail("'fixmatch.lambda_u' must be >= 0");
  if (fm_lambda_ssl < 0.0) fail("'fixmatch.lambda_ssl' must be >= 0");
  if (fm_iterations < 1) fail("'fixmatch.iterations' must be >= 1");
  if (fm_eval_every < 1) fail("'fixmatch.eval_every' must be >= 1");
  if (fm_num_labeled < 1) fail("'fixmatch.num_labeled' must be >= 1");
  if (train_limit < 0 || val_limit < 0) fail("dataset limits must be >= 0");
}

inline ConfigMap RunConfig::to_map() const {
  ConfigMap m;
  auto num = [](auto v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
  };
  m["seed"] = num(seed);
  m["dataset.root"] = dataset_root;
  m["dataset.kind"] = dataset_kind;
  m["dataset.imbalance_rho"] = num(imbalance_rho);
  m["dataset.imbalance_seed"] = num(imbalance_seed);
  if (!split_manifest.empty()) m["dataset.split_manifest"] = split_manifest;
  m["dataset.train_limit"] = num(train_limit);
  m["dataset.val_limit"] = num(val_limit);
  m["model.backbone"] = backbone;
  m["tasks"] = tasks_text;
  m["gated"] = gated ? "true" : "false";
  m["ssl_ratio"] = num(ssl_ratio);
  m["transform_prob"] = num(transform_prob);
  m["augment.base"] = base_augment ? "true" : "false";
  m["train.epochs"] = num(epochs);
  m["train.batch_size"] = num(batch_size);
  m["train.lr"] = num(lr);
  m["train.momentum"] = num(momentum);
  m["train.weight_decay"] = num(weight_decay);
  m["train.schedule"] = schedule;
  {
    std::string ms;
    for (std::size_t i = 0; i < milestones.size(); ++i)
      ms += (i ? "," : "") + std::to_string(milestones[i]);
    m["train.milestones"] = ms;
  }
  m["train.decay_factor"] = num(decay_factor);
  m["train.objective"] = objective;
  m["ldam.max_margin"] = num(ldam_max_margin);
  m["ldam.scale"] = num(ldam_scale);
  m["ldam.drw_epoch"] = num(ldam_drw_epoch);
  m["ldam.beta"] = num(ldam_beta);
  m["pgd.eps"] = num(pgd_eps);
  m["pgd.alpha"] = num(pgd_alpha);
  m["pgd.steps"] = num(pgd_steps);
  m["pgd.random_start"] = pgd_random_start ? "true" : "false";
  m["fixmatch.tau"] = num(fm_tau);
  m["fixmatch.lambda_u"] = num(fm_lambda_u);
  m["fixmatch.mu"] = num(fm_mu);
  m["fixmatch.lambda_ssl"] = num(fm_lambda_ssl);
  m["fixmatch.iterations"] = num(fm_iterations);
  m["fixmatch.eval_every"] = num(fm_eval_every);
  m["fixmatch.num_labeled"] = num(fm_num_labeled);
  m["fixmatch.ema"] = fm_ema ? "true" : "false";
  m["fixmatch.ema_decay"] = num(fm_ema_decay);
  m["fixmatch.jitter"] = num(fm_jitter);
  m["fixmatch.grayscale_p"] = num(fm_grayscale_p);
  m["fixmatch.cutout"] = num(fm_cutout);
  return m;
}

inline void write_config_snapshot(const RunConfig& cfg,
                                  const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write config snapshot " + path);
  for (const auto& [key, value] : cfg.to_map())
    out << key << "=" << value << "\n";
}

}  // namespace gssl::train
