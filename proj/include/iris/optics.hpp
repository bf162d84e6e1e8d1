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
//
// Backside-imaging signal model: silicon transmission, sensor sensitivity,
// the combined signal budget with exposure compensation, and the spatial
// resolution arithmetic. Everything here is a pure function of its inputs.

#ifndef IRIS_OPTICS_HPP_
#define IRIS_OPTICS_HPP_

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "iris/curves.hpp"
#include "iris/errors.hpp"

namespace iris {

struct NoiseParams {
  double read_noise_sigma = 0.01;  // in full-scale intensity units
  bool shot_noise = false;         // adds signal-proportional variance
  bool enabled = false;

  void validate() const {
    if (!(read_noise_sigma >= 0.0)) {
      throw DomainError("noise: read_noise_sigma must be >= 0");
    }
  }
};

struct OpticalConfig {
  double wavelength_nm = 1070.0;
  double silicon_thickness_um = 300.0;
  int passes = 1;  // 1 follows the usual single-pass budget; 2 = reflected path
  double numerical_aperture = 0.58;
  double microns_per_pixel = 1.67;
  double illumination_elevation_deg = 0.0;  // 0 = vertical, uniform field
  double illumination_azimuth_deg = 0.0;    // 0 = +x, counterclockwise, y up
  double exposure_s = 1.0;
  double gain = 30.0;
  NoiseParams noise;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(wavelength_nm >= 900.0 && wavelength_nm <= 1200.0)) {
      throw DomainError("config: wavelength must be in [900, 1200] nm");
    }
    if (!(silicon_thickness_um >= 0.0)) {
      throw DomainError("config: silicon thickness must be >= 0 um");
    }
    if (passes != 1 && passes != 2) {
      throw DomainError("config: passes must be 1 or 2");
    }
    if (!(numerical_aperture > 0.0 && numerical_aperture <= 1.0)) {
      throw DomainError("config: numerical aperture must be in (0, 1]");
    }
    if (!(microns_per_pixel > 0.0)) {
      throw DomainError("config: microns per pixel must be > 0");
    }
    if (!(illumination_elevation_deg >= 0.0 &&
          illumination_elevation_deg <= 60.0)) {
      throw DomainError("config: illumination elevation must be in [0, 60] deg");
    }
    if (!(exposure_s > 0.0)) {
      throw DomainError("config: exposure must be > 0 s");
    }
    if (!(gain > 0.0)) {
      throw DomainError("config: gain must be > 0");
    }
    noise.validate();
  }
};

inline nlohmann::json to_json(const NoiseParams& n) {
  return {{"read_noise_sigma", n.read_noise_sigma},
          {"shot_noise", n.shot_noise},
          {"enabled", n.enabled}};
}

inline NoiseParams noise_from_json(const nlohmann::json& j) {
  NoiseParams n;
  n.read_noise_sigma = j.value("read_noise_sigma", n.read_noise_sigma);
  n.shot_noise = j.value("shot_noise", n.shot_noise);
  n.enabled = j.value("enabled", n.enabled);
  return n;
}

inline nlohmann::json to_json(const OpticalConfig& c) {
  return {{"wavelength_nm", c.wavelength_nm},
          {"silicon_thickness_um", c.silicon_thickness_um},
          {"passes", c.passes},
          {"numerical_aperture", c.numerical_aperture},
          {"microns_per_pixel", c.microns_per_pixel},
          {"illumination_elevation_deg", c.illumination_elevation_deg},
          {"illumination_azimuth_deg", c.illumination_azimuth_deg},
          {"exposure_s", c.exposure_s},
          {"gain", c.gain},
          {"noise", to_json(c.noise)},
          {"seed", c.seed}};
}

inline OpticalConfig config_from_json(const nlohmann::json& j) {
  OpticalConfig c;
  c.wavelength_nm = j.value("wavelength_nm", c.wavelength_nm);
  c.silicon_thickness_um = j.value("silicon_thickness_um", c.silicon_thickness_um);
  c.passes = j.value("passes", c.passes);
  c.numerical_aperture = j.value("numerical_aperture", c.numerical_aperture);
  c.microns_per_pixel = j.value("microns_per_pixel", c.microns_per_pixel);
  c.illumination_elevation_deg =
      j.value("illumination_elevation_deg", c.illumination_elevation_deg);
  c.illumination_azimuth_deg =
      j.value("illumination_azimuth_deg", c.illumination_azimuth_deg);
  c.exposure_s = j.value("exposure_s", c.exposure_s);
  c.gain = j.value("gain", c.gain);
  if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
  c.seed = j.value("seed", c.seed);
  return c;
}

struct SignalBudget {
  double transmission = 0.0;         // fraction of light through the bulk
  double sensitivity = 0.0;          // sensor response, fraction of peak
  double combined = 0.0;             // transmission * sensitivity
  double reduction_factor = 0.0;     // 1 / combined
  double suggested_exposure_s = 0.0; // base exposure / combined
};

// Absorption depth (1/e intensity) at a wavelength, from a sampled curve.
inline double absorption_depth_um(const SpectralCurve& curve,
                                  double wavelength_nm) {
  return curve.evaluate(wavelength_nm);
}

// Exponential attenuation through `thickness_um` of bulk, once or twice.
inline double transmission(double depth_um, double thickness_um, int passes) {
  if (!(depth_um > 0.0)) {
    throw DomainError("transmission: absorption depth must be > 0 um");
  }
  if (!(thickness_um >= 0.0)) {
    throw DomainError("transmission: thickness must be >= 0 um");
  }
  if (passes != 1 && passes != 2) {
    throw DomainError("transmission: passes must be 1 or 2");
  }
  return std::exp(-static_cast<double>(passes) * thickness_um / depth_um);
}

// Sensor response as a fraction of its peak.
inline double sensor_sensitivity(const SpectralCurve& curve,
                                 double wavelength_nm) {
  const double v = curve.evaluate(wavelength_nm);
  if (v < 0.0 || v > 1.0) {
    std::ostringstream msg;
    msg << curve.name() << ": sensitivity " << v << " at " << wavelength_nm
        << " nm falls outside [0, 1]; curve must be normalized to its peak";
    throw ValidationError(msg.str());
  }
  return v;
}

// Combined through-silicon signal and the exposure needed to compensate.
inline SignalBudget signal_budget(const OpticalConfig& config,
                                  const SpectralCurve& absorption,
                                  const SpectralCurve& sensitivity,
                                  double base_exposure_s) {
  config.validate();
  if (!(base_exposure_s > 0.0)) {
    throw DomainError("signal_budget: base exposure must be > 0 s");
  }
  SignalBudget b;
  const double depth = absorption_depth_um(absorption, config.wavelength_nm);
  b.transmission =
      transmission(depth, config.silicon_thickness_um, config.passes);
  b.sensitivity = sensor_sensitivity(sensitivity, config.wavelength_nm);
  b.combined = b.transmission * b.sensitivity;
  b.reduction_factor = 1.0 / b.combined;
  b.suggested_exposure_s = base_exposure_s / b.combined;
  return b;
}

// Rayleigh-style resolution limit, in microns.
inline double diffraction_limit_um(double wavelength_nm,
                                   double numerical_aperture) {
  if (!(numerical_aperture > 0.0 && numerical_aperture <= 1.0)) {
    throw DomainError("diffraction_limit: numerical aperture must be in (0, 1]");
  }
  if (!(wavelength_nm > 0.0)) {
    throw DomainError("diffraction_limit: wavelength must be > 0 nm");
  }
  return 0.61 * (wavelength_nm * 1e-3) / numerical_aperture;
}

// Image scale from a die width and the pixels spanning it.
inline double microns_per_pixel(double die_width_um, long pixels_across) {
  if (pixels_across <= 0) {
    throw DomainError("microns_per_pixel: pixel count must be > 0");
  }
  if (!(die_width_um > 0.0)) {
    throw DomainError("microns_per_pixel: die width must be > 0 um");
  }
  return die_width_um / static_cast<double>(pixels_across);
}

}  // namespace iris

#endif  // IRIS_OPTICS_HPP_
