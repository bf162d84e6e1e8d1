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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "iris/data.hpp"
#include "iris/imager.hpp"

using namespace iris;
using Catch::Approx;

namespace {

// Half-max width of a discrete 1-D profile, linearly interpolated.
double measured_fwhm_samples(const std::vector<double>& taps) {
  const int n = static_cast<int>(taps.size());
  const int mid = n / 2;
  const double half = taps[mid] / 2.0;
  double right = 0.0;
  for (int i = mid; i + 1 < n; ++i) {
    if (taps[i] >= half && taps[i + 1] < half) {
      right = i + (taps[i] - half) / (taps[i] - taps[i + 1]);
      break;
    }
  }
  return 2.0 * (right - mid);
}

DieLayout uniform_layout(double die_um, double pitch_um, float value) {
  DieLayout layout;
  layout.die_w_um = die_um;
  layout.die_h_um = die_um;
  layout.grid_pitch_um = pitch_um;
  layout.nx = grid_dim(die_um, pitch_um);
  layout.ny = grid_dim(die_um, pitch_um);
  layout.reflectance.assign(static_cast<std::size_t>(layout.nx) * layout.ny,
                            value);
  return layout;
}

// Unit-signal configuration: thickness 0 and a flat sensor make
// gain * exposure the whole scale factor.
const SpectralCurve kFlatSensor({{900.0, 1.0}, {1200.0, 1.0}},
                                Interpolation::kLinear);
const SpectralCurve& kAbs = default_absorption_curve();

OpticalConfig unit_config(double um_per_px, double gain, double exposure) {
  OpticalConfig config;
  config.silicon_thickness_um = 0.0;
  config.microns_per_pixel = um_per_px;
  config.gain = gain;
  config.exposure_s = exposure;
  return config;
}

}  // namespace

TEST_CASE("psf kernel is normalized", "[imager]") {
  OpticalConfig config;
  const PsfKernel k = psf_kernel(config, 0.25);
  double sum = 0.0;
  for (const double v : k.grid()) sum += v;
  REQUIRE(sum == Approx(1.0).margin(1e-9));
}

TEST_CASE("psf width tracks the diffraction limit", "[imager]") {
  OpticalConfig config;  // 1070 nm, NA 0.58
  const PsfKernel k = psf_kernel(config, 0.25);
  const double fwhm_samples = measured_fwhm_samples(k.taps);
  REQUIRE(fwhm_samples * 0.25 == Approx(1.13).margin(0.25));
  REQUIRE(fwhm_samples == Approx(4.5).margin(1.0));

  OpticalConfig narrow = config;
  narrow.numerical_aperture = 0.4;
  OpticalConfig doubled = config;
  doubled.numerical_aperture = 0.8;
  const double wide_fwhm = measured_fwhm_samples(psf_kernel(narrow, 0.25).taps);
  const double tight_fwhm =
      measured_fwhm_samples(psf_kernel(doubled, 0.25).taps);
  REQUIRE(tight_fwhm == Approx(wide_fwhm / 2.0).margin(1.0));
}

TEST_CASE("illumination field is uniform at zero elevation", "[imager]") {
  OpticalConfig config;
  config.illumination_azimuth_deg = 123.0;
  const IlluminationField f = illumination_field(config, 50.0, 50.0, 0.5);
  for (const double v : f.values) REQUIRE(v == 1.0);
}

TEST_CASE("oblique light from the top right brightens that corner", "[imager]") {
  OpticalConfig config;
  config.illumination_elevation_deg = 30.0;
  config.illumination_azimuth_deg = 45.0;
  const IlluminationField f = illumination_field(config, 80.0, 80.0, 0.5);
  double max_v = 0.0;
  int max_row = -1, max_col = -1;
  for (int r = 0; r < f.ny; ++r) {
    for (int c = 0; c < f.nx; ++c) {
      if (f.at(r, c) > max_v) {
        max_v = f.at(r, c);
        max_row = r;
        max_col = c;
      }
    }
  }
  REQUIRE(max_row == 0);           // top
  REQUIRE(max_col == f.nx - 1);    // right
  REQUIRE(max_v > 1.0);
}

TEST_CASE("opposite azimuths mirror the field about the center", "[imager]") {
  OpticalConfig config;
  config.illumination_elevation_deg = 25.0;
  config.illumination_azimuth_deg = 70.0;
  OpticalConfig flipped = config;
  flipped.illumination_azimuth_deg = 250.0;
  const IlluminationField f1 = illumination_field(config, 60.0, 60.0, 0.5);
  const IlluminationField f2 = illumination_field(flipped, 60.0, 60.0, 0.5);
  for (int r = 0; r < f1.ny; ++r) {
    for (int c = 0; c < f1.nx; ++c) {
      REQUIRE(f1.at(r, c) ==
              Approx(f2.at(f1.ny - 1 - r, f1.nx - 1 - c)).margin(1e-12));
    }
  }
}

TEST_CASE("elevation outside [0, 60] is rejected", "[imager]") {
  OpticalConfig config;
  config.illumination_elevation_deg = 61.0;
  REQUIRE_THROWS_AS(illumination_field(config, 10.0, 10.0, 0.5), DomainError);
}

TEST_CASE("constant reflectance renders to a constant image", "[imager]") {
  // gain * exposure * combined = 2 over reflectance 0.5: every pixel sits at
  // full scale before quantization.
  const DieLayout layout = uniform_layout(32.0, 0.25, 0.5f);
  const OpticalConfig config = unit_config(2.0, 4.0, 0.5);
  IrisImage image = render_base(layout, config, kAbs, kFlatSensor);
  for (const double p : image.pixels) {
    REQUIRE(p == Approx(1.0).margin(1e-6));
  }
  quantize_image(image);
  for (const double p : image.pixels) REQUIRE(p == 65535.0);
}

TEST_CASE("renderer preserves the mean on border-padded layouts", "[imager]") {
  // Texture window surrounded by a zero margin wider than the kernel, pixel
  // pitch an exact multiple of the grid pitch: blur and area-averaging must
  // conserve the mean to float precision.
  DieLayout layout = uniform_layout(64.0, 0.5, 0.0f);
  Rng rng(42);
  const PsfKernel k = psf_kernel(unit_config(2.0, 1.0, 1.0), 0.5);
  const int margin = 2 * k.radius + 2;
  for (int row = margin; row < layout.ny - margin; ++row) {
    for (int col = margin; col < layout.nx - margin; ++col) {
      layout.refl(row, col) = static_cast<float>(rng.uniform(0.1, 0.9));
    }
  }
  const OpticalConfig config = unit_config(2.0, 3.0, 1.0);
  const IrisImage image = render_base(layout, config, kAbs, kFlatSensor);
  REQUIRE(image.width * static_cast<int>(2.0 / 0.5) == layout.nx);
  const double expected = 3.0 * layout.mean_reflectance();
  REQUIRE(image_mean(image) == Approx(expected).epsilon(1e-6));
}

TEST_CASE("doubling the exposure doubles every pixel exactly", "[imager]") {
  const DieLayout layout = iris_test::small_test_layout(5, 80.0, 0.5);
  OpticalConfig config = unit_config(2.0, 1.0, 0.25);
  const IrisImage a = render_base(layout, config, kAbs, kFlatSensor);
  config.exposure_s = 0.5;
  const IrisImage b = render_base(layout, config, kAbs, kFlatSensor);
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    REQUIRE(b.pixels[i] == 2.0 * a.pixels[i]);
  }
}

TEST_CASE("seeded noisy renders are bit-identical", "[imager]") {
  const DieLayout layout = iris_test::small_test_layout(6, 60.0, 0.5);
  OpticalConfig config = unit_config(2.0, 1.5, 1.0);
  config.noise.enabled = true;
  config.noise.read_noise_sigma = 0.01;
  config.noise.shot_noise = true;
  config.seed = 909;
  const IrisImage a = render(layout, config, kAbs, kFlatSensor);
  const IrisImage b = render(layout, config, kAbs, kFlatSensor);
  REQUIRE(a.pixels == b.pixels);
  config.seed = 910;
  const IrisImage c = render(layout, config, kAbs, kFlatSensor);
  REQUIRE(a.pixels != c.pixels);
}

TEST_CASE("quantization clamps and never wraps", "[imager]") {
  REQUIRE(quantize_u16(2.0) == 65535);
  REQUIRE(quantize_u16(1.0) == 65535);
  REQUIRE(quantize_u16(-0.5) == 0);
  REQUIRE(quantize_u16(0.5) == 32768);
  const DieLayout layout = uniform_layout(16.0, 0.5, 1.0f);
  const OpticalConfig config = unit_config(2.0, 50.0, 1.0);  // far past full scale
  IrisImage image = render_base(layout, config, kAbs, kFlatSensor);
  quantize_image(image);
  for (const double p : image.pixels) REQUIRE(p == 65535.0);
}

TEST_CASE("a micron-scale patch moves pixels well above the noise floor",
          "[imager]") {
  const DieLayout layout = uniform_layout(100.0, 0.25, 0.5f);
  const double side = 2.0 * 1.67;
  const DieLayout modified =
      inject_trojan(layout, 50.0, 50.0, side * side, 0.3);
  const OpticalConfig config = unit_config(1.67, 1.0, 1.0);
  const IrisImage a = render_base(layout, config, kAbs, kFlatSensor);
  const IrisImage b = render_base(modified, config, kAbs, kFlatSensor);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(a.pixels[i] - b.pixels[i]));
  }
  REQUIRE(max_diff >= 5.0 * 0.01);
}

TEST_CASE("renderer refuses pixels finer than the layout grid", "[imager]") {
  const DieLayout layout = uniform_layout(20.0, 0.5, 0.5f);
  const OpticalConfig config = unit_config(0.25, 1.0, 1.0);
  REQUIRE_THROWS_AS(render_base(layout, config, kAbs, kFlatSensor),
                    ConfigError);
}

TEST_CASE("render metadata mirrors the configuration", "[imager]") {
  const DieLayout layout = iris_test::small_test_layout(2, 50.0, 0.5);
  OpticalConfig config = unit_config(1.0, 2.0, 1.0);
  config.seed = 77;
  const IrisImage image = render(layout, config, kAbs, kFlatSensor);
  REQUIRE(image.microns_per_pixel == 1.0);
  REQUIRE(image.metadata.at("seed").get<std::uint64_t>() == 77);
  REQUIRE(image.metadata.at("config").at("gain").get<double>() == 2.0);
}

TEST_CASE("tile capture covers the frame and respects jitter bounds",
          "[imager]") {
  const DieLayout layout = iris_test::small_test_layout(7, 128.0, 0.5);
  OpticalConfig config = unit_config(1.0, 1.5, 1.0);
  config.noise.enabled = true;

  SECTION("zero jitter means true offsets equal nominal") {
    const auto tiles =
        capture_tiles(layout, config, kAbs, kFlatSensor, 80, 32, 0, 5);
    REQUIRE(tiles.size() == 4);
    for (const auto& t : tiles) {
      REQUIRE(t.true_x == t.nominal_x);
      REQUIRE(t.true_y == t.nominal_y);
    }
  }

  SECTION("true footprints cover every pixel") {
    // 3x3 grid (tile 64, step 32) so interior tiles actually jitter.
    const auto tiles =
        capture_tiles(layout, config, kAbs, kFlatSensor, 64, 32, 10, 5);
    REQUIRE(tiles.size() == 9);
    bool any_jittered = false;
    std::vector<int> covered(128 * 128, 0);
    for (const auto& t : tiles) {
      REQUIRE(std::abs(t.true_x - t.nominal_x) <= 10);
      REQUIRE(std::abs(t.true_y - t.nominal_y) <= 10);
      any_jittered = any_jittered || t.true_x != t.nominal_x ||
                     t.true_y != t.nominal_y;
      for (int r = 0; r < 64; ++r) {
        for (int c = 0; c < 64; ++c) {
          covered[(t.true_y + r) * 128 + t.true_x + c] = 1;
        }
      }
    }
    REQUIRE(any_jittered);
    for (const int c : covered) REQUIRE(c == 1);
  }

  SECTION("tiles are exact crops of the base render when noiseless") {
    OpticalConfig quiet = config;
    quiet.noise.enabled = false;
    const auto tiles =
        capture_tiles(layout, quiet, kAbs, kFlatSensor, 80, 32, 3, 5);
    IrisImage full = render_base(layout, quiet, kAbs, kFlatSensor);
    quantize_image(full);
    for (const auto& t : tiles) {
      for (int r = 0; r < 80; ++r) {
        for (int c = 0; c < 80; ++c) {
          REQUIRE(t.image.at(r, c) == full.at(t.true_y + r, t.true_x + c));
        }
      }
    }
  }

  SECTION("parameter validation") {
    REQUIRE_THROWS_AS(
        capture_tiles(layout, config, kAbs, kFlatSensor, 64, 4, 0, 5),
        ConfigError);  // overlap too small
    REQUIRE_THROWS_AS(
        capture_tiles(layout, config, kAbs, kFlatSensor, 64, 16, 8, 5),
        ConfigError);  // jitter >= overlap / 2
    REQUIRE_THROWS_AS(
        capture_tiles(layout, config, kAbs, kFlatSensor, 400, 32, 0, 5),
        ConfigError);  // tile larger than the render
  }
}

TEST_CASE("RAM macros and standard cells render distinguishably", "[imager]") {
  const SynthPlan plan = touchscreen_die_plan(300.0, 300.0, 0.25);
  const DieLayout layout = synthesize_layout(plan, 77);
  OpticalConfig config;
  config.microns_per_pixel = 1.67;
  config.gain = 1.0;
  IrisImage image = render_base(layout, config, default_absorption_curve(),
                                default_sensor_curve());
  auto_expose(image);

  // Pixel statistics over each region's footprint, inset by a blur margin.
  const auto region_stats = [&](BlockKind kind) {
    double sum = 0.0, sum2 = 0.0;
    long n = 0;
    for (const auto& region : layout.regions) {
      if (region.kind != kind) continue;
      const double inset = 4.0;
      for (int r = 0; r < image.height; ++r) {
        const double y = (image.height - r - 0.5) * config.microns_per_pixel;
        if (y < region.origin_y_um + inset ||
            y > region.origin_y_um + region.height_um - inset) {
          continue;
        }
        for (int c = 0; c < image.width; ++c) {
          const double x = (c + 0.5) * config.microns_per_pixel;
          if (x < region.origin_x_um + inset ||
              x > region.origin_x_um + region.width_um - inset) {
            continue;
          }
          sum += image.at(r, c);
          sum2 += image.at(r, c) * image.at(r, c);
          ++n;
        }
      }
    }
    const double mean = sum / static_cast<double>(n);
    return std::pair{mean, sum2 / static_cast<double>(n) - mean * mean};
  };
  const auto [ram_mean, ram_var] = region_stats(BlockKind::kRamMacro);
  const auto [sc_mean, sc_var] = region_stats(BlockKind::kStandardCell);
  const double pooled = std::sqrt((ram_var + sc_var) / 2.0);
  REQUIRE(std::abs(ram_mean - sc_mean) > 3.0 * pooled);
}

TEST_CASE("the optional diagonal texture adds faint stripes", "[imager]") {
  SynthPlan plan = touchscreen_die_plan(80.0, 80.0, 0.5);
  const DieLayout off = synthesize_layout(plan, 3);
  plan.diagonal.enabled = true;
  plan.diagonal.amplitude = 0.03;
  const DieLayout on = synthesize_layout(plan, 3);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < on.reflectance.size(); ++i) {
    max_diff = std::max(
        max_diff, std::abs(static_cast<double>(on.reflectance[i]) -
                           static_cast<double>(off.reflectance[i])));
  }
  REQUIRE(max_diff > 0.0);
  REQUIRE(max_diff <= 0.03 + 1e-6);
}

TEST_CASE("auto exposure puts the 99th percentile at 80% of full scale",
          "[imager]") {
  const DieLayout layout = iris_test::small_test_layout(8, 120.0, 0.5);
  OpticalConfig config = unit_config(1.0, 1.0, 1.0);
  IrisImage image = render_base(layout, config, kAbs, kFlatSensor);
  auto sorted = image.pixels;
  std::sort(sorted.begin(), sorted.end());
  auto_expose(image);
  auto resorted = image.pixels;
  std::sort(resorted.begin(), resorted.end());
  const auto p99 =
      resorted[static_cast<std::size_t>(0.99 * resorted.size())];
  REQUIRE(p99 == Approx(0.8).epsilon(0.01));
}
