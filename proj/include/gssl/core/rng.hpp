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
#include <random>
#include <stdexcept>

namespace gssl {

/// Seeded random stream passed explicitly wherever sampling happens.
/// All consumers draw from one of these; there is no hidden global state,
/// so every pipeline is a pure function of (inputs, seed).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, n). n must be small relative to 2^64; the
  /// modulo bias is negligible for the label-space sizes used here.
  int below(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
    return static_cast<int>(gen_() % static_cast<std::uint64_t>(n));
  }

  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(gen_);
  }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(gen_);
  }

  /// Underlying engine, for std::shuffle.
  std::mt19937_64& engine() { return gen_; }

  /// Independent child stream; used to decouple e.g. data-order draws from
  /// attack-noise draws so that disabling one leaves the other unchanged.
  static Rng derive(std::uint64_t seed, std::uint64_t salt) {
    return Rng(splitmix64(seed ^ (salt * 0x9E3779B97F4A7C15ull)));
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace gssl
