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
#include "iris/optics.hpp"

using namespace iris;
using Catch::Approx;

namespace {
const SpectralCurve& kAbs = default_absorption_curve();
const SpectralCurve& kSen = default_sensor_curve();
}  // namespace

TEST_CASE("absorption depth at 1000 nm passes about 10% of 0.3 mm", "[optics]") {
  const double depth = absorption_depth_um(kAbs, 1000.0);
  const double t = transmission(depth, 300.0, 1);
  REQUIRE(t >= 0.05);
  REQUIRE(t <= 0.15);
}

TEST_CASE("absorption depth rises steeply from 1000 to 1100 nm", "[optics]") {
  REQUIRE(absorption_depth_um(kAbs, 1100.0) > absorption_depth_um(kAbs, 1000.0));
  // Monotone non-decreasing across the opacity-to-transparency band.
  double prev = absorption_depth_um(kAbs, 1000.0);
  for (double w = 1001.0; w <= 1100.0; w += 1.0) {
    const double d = absorption_depth_um(kAbs, w);
    REQUIRE(d >= prev);
    prev = d;
  }
}

TEST_CASE("transmission matches the exponential attenuation form", "[optics]") {
  REQUIRE(transmission(130.3, 300.0, 1) == Approx(0.100).margin(0.001));
  // Zero thickness attenuates nothing.
  REQUIRE(transmission(87.3, 0.0, 1) == 1.0);
  // Two passes square the single-pass fraction.
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const double d = rng.uniform(10.0, 5000.0);
    const double t = rng.uniform(0.0, 800.0);
    const double once = transmission(d, t, 1);
    REQUIRE(transmission(d, t, 2) == Approx(once * once).epsilon(1e-12));
  }
}

TEST_CASE("transmission is monotone in thickness and depth", "[optics]") {
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const double d = rng.uniform(20.0, 2000.0);
    const double t = rng.uniform(1.0, 500.0);
    const double dd = rng.uniform(1.0, 500.0);
    const double dt = rng.uniform(1.0, 500.0);
    REQUIRE(transmission(d, t + dt, 1) < transmission(d, t, 1));
    REQUIRE(transmission(d + dd, t, 1) > transmission(d, t, 1));
  }
}

TEST_CASE("transmission rejects bad arguments", "[optics]") {
  REQUIRE_THROWS_AS(transmission(0.0, 300.0, 1), DomainError);
  REQUIRE_THROWS_AS(transmission(-5.0, 300.0, 1), DomainError);
  REQUIRE_THROWS_AS(transmission(100.0, -1.0, 1), DomainError);
  REQUIRE_THROWS_AS(transmission(100.0, 300.0, 3), DomainError);
}

TEST_CASE("sensor sensitivity anchors", "[optics]") {
  REQUIRE(sensor_sensitivity(kSen, 1000.0) == Approx(0.10).margin(0.03));
  REQUIRE(sensor_sensitivity(kSen, kSen.peak_wavelength_nm()) == 1.0);
  REQUIRE(sensor_sensitivity(kSen, 1100.0) < sensor_sensitivity(kSen, 1000.0));
  REQUIRE_THROWS_AS(sensor_sensitivity(kSen, 1250.0), RangeError);
}

TEST_CASE("signal budget reproduces the ~100x reduction at 1000 nm", "[optics]") {
  OpticalConfig config;
  config.wavelength_nm = 1000.0;
  config.silicon_thickness_um = 300.0;
  config.passes = 1;
  const SignalBudget b = signal_budget(config, kAbs, kSen, 0.033);
  REQUIRE(b.reduction_factor >= 70.0);
  REQUIRE(b.reduction_factor <= 150.0);
  REQUIRE(b.suggested_exposure_s >= 2.3);
  REQUIRE(b.suggested_exposure_s <= 5.0);
}

TEST_CASE("signal budget with no attenuation is exactly 1", "[optics]") {
  // Thickness 0 plus a sensor at its peak leaves the signal untouched.
  const SpectralCurve peak_sensor({{900.0, 0.5}, {1000.0, 1.0}, {1100.0, 0.5}},
                                  Interpolation::kLinear);
  OpticalConfig config;
  config.wavelength_nm = 1000.0;
  config.silicon_thickness_um = 0.0;
  const SignalBudget b = signal_budget(config, kAbs, peak_sensor, 0.033);
  REQUIRE(b.combined == 1.0);
  REQUIRE(b.reduction_factor == 1.0);
}

TEST_CASE("signal budget at 1070 nm from the bundled curves", "[optics]") {
  OpticalConfig config;  // 1070 nm, 300 um, 1 pass defaults
  const SignalBudget b = signal_budget(config, kAbs, kSen, 0.033);
  // Independent route: evaluate the curves and compose by hand.
  const double t = std::exp(-300.0 / kAbs.evaluate(1070.0));
  const double s = kSen.evaluate(1070.0);
  REQUIRE(b.transmission == Approx(t).epsilon(1e-12));
  REQUIRE(b.sensitivity == s);
  REQUIRE(std::isfinite(b.reduction_factor));
  REQUIRE(b.reduction_factor > 1.0);
}

TEST_CASE("budget combined equals transmission times sensitivity", "[optics]") {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    OpticalConfig config;
    config.wavelength_nm = rng.uniform(900.0, 1200.0);
    config.silicon_thickness_um = rng.uniform(0.0, 700.0);
    config.passes = rng.uniform() < 0.5 ? 1 : 2;
    const SignalBudget b = signal_budget(config, kAbs, kSen, 0.033);
    REQUIRE(b.combined ==
            Approx(b.transmission * b.sensitivity).epsilon(1e-12));
    REQUIRE(b.reduction_factor * b.combined == Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("diffraction limit matches the practical resolution anchor", "[optics]") {
  const double limit = diffraction_limit_um(1070.0, 0.58);
  REQUIRE(limit == Approx(1.13).epsilon(0.15));
}

TEST_CASE("diffraction limit algebra", "[optics]") {
  // NA chosen to invert the expression exactly.
  REQUIRE(diffraction_limit_um(1000.0, 0.61) == 1.0);
  // Doubling the wavelength doubles the limit exactly.
  REQUIRE(diffraction_limit_um(2140.0, 0.58) ==
          2.0 * diffraction_limit_um(1070.0, 0.58));
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double w = rng.uniform(900.0, 1200.0);
    const double na = rng.uniform(0.1, 1.0);
    const double k = rng.uniform(0.5, 3.0);
    REQUIRE(diffraction_limit_um(k * w, na) ==
            Approx(k * diffraction_limit_um(w, na)).epsilon(1e-12));
  }
  REQUIRE_THROWS_AS(diffraction_limit_um(1070.0, 0.0), DomainError);
  REQUIRE_THROWS_AS(diffraction_limit_um(1070.0, 1.5), DomainError);
}

TEST_CASE("microns per pixel arithmetic", "[optics]") {
  REQUIRE(microns_per_pixel(3900.0, 2330) == Approx(1.674).margin(0.005));
  REQUIRE(microns_per_pixel(8000.0, 4290) == Approx(1.865).margin(0.005));
  REQUIRE(microns_per_pixel(1000.0, 1000) == 1.0);
  REQUIRE_THROWS_AS(microns_per_pixel(1000.0, 0), DomainError);
  REQUIRE_THROWS_AS(microns_per_pixel(-3.0, 10), DomainError);
}

TEST_CASE("optical config validation", "[optics]") {
  OpticalConfig config;
  REQUIRE_NOTHROW(config.validate());
  OpticalConfig bad = config;
  bad.wavelength_nm = 850.0;
  REQUIRE_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.passes = 3;
  REQUIRE_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.illumination_elevation_deg = 75.0;
  REQUIRE_THROWS_AS(bad.validate(), DomainError);
  bad = config;
  bad.noise.read_noise_sigma = -0.1;
  REQUIRE_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("optical config JSON round-trip", "[optics]") {
  OpticalConfig config;
  config.wavelength_nm = 1010.0;
  config.illumination_azimuth_deg = 37.0;
  config.noise.enabled = true;
  config.noise.shot_noise = true;
  config.seed = 1234567890123ull;
  const OpticalConfig back = config_from_json(to_json(config));
  REQUIRE(back.wavelength_nm == config.wavelength_nm);
  REQUIRE(back.illumination_azimuth_deg == config.illumination_azimuth_deg);
  REQUIRE(back.noise.enabled);
  REQUIRE(back.noise.shot_noise);
  REQUIRE(back.seed == config.seed);
}
