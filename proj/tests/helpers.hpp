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

#ifndef IRIS_TESTS_HELPERS_HPP_
#define IRIS_TESTS_HELPERS_HPP_

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "iris/iris.hpp"

namespace iris_test {

inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("iris_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string data_dir() {
  const char* env = std::getenv("IRIS_DATA_DIR");
  return env ? env : "data";
}

// Full-window exhaustive NCC search, written independently of the library's
// registration path: per-shift two-pass mean/variance, no shared code.
inline iris::Offset oracle_register(const iris::IrisImage& ref,
                                    const iris::IrisImage& sample, int radius) {
  iris::Offset best;
  bool have_best = false;
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      const int c0 = std::max(0, dx);
      const int c1 = std::min(ref.width, dx + sample.width);
      const int r0 = std::max(0, dy);
      const int r1 = std::min(ref.height, dy + sample.height);
      const long n = static_cast<long>(c1 - c0) * (r1 - r0);
      if (n < 2) continue;
      double mean_a = 0.0, mean_b = 0.0;
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
          mean_a += ref.at(r, c);
          mean_b += sample.at(r - dy, c - dx);
        }
      }
      mean_a /= static_cast<double>(n);
      mean_b /= static_cast<double>(n);
      double va = 0.0, vb = 0.0, cov = 0.0;
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
          const double a = ref.at(r, c) - mean_a;
          const double b = sample.at(r - dy, c - dx) - mean_b;
          va += a * a;
          vb += b * b;
          cov += a * b;
        }
      }
      iris::Offset o;
      o.dx = dx;
      o.dy = dy;
      o.score = (va > 0.0 && vb > 0.0) ? cov / std::sqrt(va * vb) : 0.0;
      const auto better = [](const iris::Offset& p, const iris::Offset& q) {
        if (p.score != q.score) return p.score > q.score;
        const int lp = std::abs(p.dx) + std::abs(p.dy);
        const int lq = std::abs(q.dx) + std::abs(q.dy);
        if (lp != lq) return lp < lq;
        if (p.dy != q.dy) return p.dy < q.dy;
        return p.dx < q.dx;
      };
      if (!have_best || better(o, best)) {
        best = o;
        have_best = true;
      }
    }
  }
  return best;
}

// Small textured die for registration and comparison tests.
inline iris::DieLayout small_test_layout(std::uint64_t seed,
                                         double die_um = 220.0,
                                         double pitch_um = 0.5) {
  iris::SynthPlan plan = iris::touchscreen_die_plan(die_um, die_um, pitch_um);
  return iris::synthesize_layout(plan, seed);
}

inline iris::OpticalConfig test_config(double um_per_px = 1.67) {
  iris::OpticalConfig config;
  config.microns_per_pixel = um_per_px;
  config.gain = 44.0;
  return config;
}

inline iris::IrisImage quick_render(const iris::DieLayout& layout,
                                    const iris::OpticalConfig& config) {
  return iris::render(layout, config, iris::default_absorption_curve(),
                      iris::default_sensor_curve());
}

}  // namespace iris_test

#endif  // IRIS_TESTS_HELPERS_HPP_
