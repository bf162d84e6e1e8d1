// Copyright 2026 The iris-sim Authors
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

#ifndef IRIS_RNG_HPP_
#define IRIS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace iris {

// All randomness in the library flows through splitmix64 so that a given
// seed reproduces bit-identical outputs on every run and platform. The
// standard <random> distributions are implementation-defined and would
// break that guarantee.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

// Folds a stage name (FNV-1a) into the run seed. Each pipeline stage draws
// from its own stream, so adding a stage never perturbs the others.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : stage) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return mix64(seed, h);
}

// Sequential generator for noise streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive on both ends.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  // Box-Muller; the spare variate is dropped so the state stays one word.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

// Order-independent hash noise for procedural textures: the value at a
// sample depends only on (seed, a, b, c), never on evaluation order.
inline double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c = 0) {
  const std::uint64_t s = mix64(mix64(mix64(seed, a), b), c);
  std::uint64_t state = s;
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace iris

#endif  // IRIS_RNG_HPP_
