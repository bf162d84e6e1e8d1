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
// Forward renderer: die layout + optical configuration -> simulated
// backside image. The chain is: illuminate, reflect, blur by the system
// PSF, sample onto the sensor grid, expose, add noise, quantize.

#ifndef IRIS_IMAGER_HPP_
#define IRIS_IMAGER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "iris/curves.hpp"
#include "iris/errors.hpp"
#include "iris/image.hpp"
#include "iris/layout.hpp"
#include "iris/optics.hpp"
#include "iris/rng.hpp"

namespace iris {

// Gradient strength per unit tan(elevation) for oblique illumination.
inline constexpr double kIlluminationGradientScale = 0.5;
// Fields never drop below this, however oblique the light.
inline constexpr double kIlluminationFloor = 0.05;
// Shot-noise scale: variance = signal / kShotNoiseFullWell at full scale 1.0.
inline constexpr double kShotNoiseFullWell = 1e4;

inline constexpr double kFwhmPerSigma = 2.354820045030949;  // 2*sqrt(2 ln 2)

// Isotropic Gaussian blur whose FWHM equals the diffraction limit,
// sampled at the layout grid pitch and truncated at +/-3 sigma.
struct PsfKernel {
  int radius = 0;
  std::vector<double> taps;  // 1-D profile, size 2*radius+1, sums to 1
  double sigma_samples = 0.0;
  double fwhm_um = 0.0;

  // The full 2-D kernel (outer product of the separable profile).
  std::vector<double> grid() const {
    const int n = 2 * radius + 1;
    std::vector<double> k(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        k[static_cast<std::size_t>(r) * n + c] = taps[r] * taps[c];
      }
    }
    return k;
  }
};

inline PsfKernel psf_kernel(const OpticalConfig& config, double grid_pitch_um) {
  config.validate();
  if (!(grid_pitch_um > 0.0)) {
    throw DomainError("psf_kernel: grid pitch must be > 0 um");
  }
  PsfKernel k;
  k.fwhm_um =
      diffraction_limit_um(config.wavelength_nm, config.numerical_aperture);
  const double sigma_um = k.fwhm_um / kFwhmPerSigma;
  k.sigma_samples = sigma_um / grid_pitch_um;
  k.radius = static_cast<int>(std::ceil(3.0 * k.sigma_samples));
  k.taps.resize(2 * k.radius + 1);
  double sum = 0.0;
  for (int d = -k.radius; d <= k.radius; ++d) {
    const double t = std::exp(-0.5 * (d / k.sigma_samples) * (d / k.sigma_samples));
    k.taps[d + k.radius] = t;
    sum += t;
  }
  for (double& t : k.taps) t /= sum;
  return k;
}

namespace detail {

// The oblique-light field is affine in position, so it splits into a
// per-column and a per-row term; the sample value is their clipped sum.
struct FieldTerms {
  std::vector<double> col_term;  // carries the constant 1
  std::vector<double> row_term;
};

inline FieldTerms field_terms(const OpticalConfig& config, double die_w_um,
                              double die_h_um, double pitch_um, int nx, int ny) {
  FieldTerms f;
  f.col_term.assign(nx, 1.0);
  f.row_term.assign(ny, 0.0);
  if (config.illumination_elevation_deg == 0.0) return f;

  const double g = std::tan(config.illumination_elevation_deg *
                            std::numbers::pi / 180.0) *
                   kIlluminationGradientScale;
  const double az = config.illumination_azimuth_deg * std::numbers::pi / 180.0;
  const double ux = std::cos(az);
  const double uy = std::sin(az);
  const double cx = die_w_um / 2.0;
  const double cy = die_h_um / 2.0;
  // Normalize so the strongest corner projects to exactly 1.
  const double norm =
      std::max(std::abs(cx * ux) + std::abs(cy * uy), 1e-300);
  for (int col = 0; col < nx; ++col) {
    const double x = (col + 0.5) * pitch_um;
    f.col_term[col] = 1.0 + g * ((x - cx) * ux) / norm;
  }
  for (int row = 0; row < ny; ++row) {
    const double y = (ny - row - 0.5) * pitch_um;
    f.row_term[row] = g * ((y - cy) * uy) / norm;
  }
  return f;
}

}  // namespace detail

struct IlluminationField {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, row 0 top

  double at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * nx + col];
  }
};

// Relative illumination across the die for oblique light: 1 at the center,
// rising toward the lit corner and falling opposite it.
inline IlluminationField illumination_field(const OpticalConfig& config,
                                            double die_w_um, double die_h_um,
                                            double pitch_um) {
  config.validate();
  if (!(die_w_um > 0.0 && die_h_um > 0.0 && pitch_um > 0.0)) {
    throw DomainError("illumination_field: die size and pitch must be > 0");
  }
  IlluminationField field;
  field.nx = grid_dim(die_w_um, pitch_um);
  field.ny = grid_dim(die_h_um, pitch_um);
  const auto terms =
      detail::field_terms(config, die_w_um, die_h_um, pitch_um, field.nx, field.ny);
  field.values.resize(static_cast<std::size_t>(field.nx) * field.ny);
  for (int row = 0; row < field.ny; ++row) {
    for (int col = 0; col < field.nx; ++col) {
      field.values[static_cast<std::size_t>(row) * field.nx + col] = std::max(
          kIlluminationFloor, terms.col_term[col] + terms.row_term[row]);
    }
  }
  return field;
}

namespace detail {

// Separable blur with the kernel mass renormalized where it overhangs the
// border, so constant rasters stay constant everywhere.
inline void blur_pass_horizontal(const std::vector<float>& in, int nx, int ny,
                                 const std::vector<double>& taps, int radius,
                                 std::vector<float>& out) {
  for (int row = 0; row < ny; ++row) {
    const float* src = in.data() + static_cast<std::size_t>(row) * nx;
    float* dst = out.data() + static_cast<std::size_t>(row) * nx;
    for (int col = 0; col < nx; ++col) {
      const int lo = std::max(-radius, -col);
      const int hi = std::min(radius, nx - 1 - col);
      double acc = 0.0;
      double w = 0.0;
      for (int d = lo; d <= hi; ++d) {
        const double t = taps[d + radius];
        acc += t * src[col + d];
        w += t;
      }
      dst[col] = static_cast<float>(acc / w);
    }
  }
}

inline void blur_pass_vertical(const std::vector<float>& in, int nx, int ny,
                               const std::vector<double>& taps, int radius,
                               std::vector<float>& out) {
  for (int row = 0; row < ny; ++row) {
    const int lo = std::max(-radius, -row);
    const int hi = std::min(radius, ny - 1 - row);
    float* dst = out.data() + static_cast<std::size_t>(row) * nx;
    for (int col = 0; col < nx; ++col) {
      double acc = 0.0;
      double w = 0.0;
      for (int d = lo; d <= hi; ++d) {
        const double t = taps[d + radius];
        acc += t * in[static_cast<std::size_t>(row + d) * nx + col];
        w += t;
      }
      dst[col] = static_cast<float>(acc / w);
    }
  }
}

// Overlap weights of one output pixel row/column against the grid samples.
struct BoxSpan {
  int first = 0;
  std::vector<double> weights;
};

inline std::vector<BoxSpan> box_spans(int n_out, double ratio, int n_in) {
  std::vector<BoxSpan> spans(n_out);
  for (int j = 0; j < n_out; ++j) {
    const double start = j * ratio;
    const double end = (j + 1) * ratio;
    const int first = std::max(0, static_cast<int>(std::floor(start)));
    const int last = std::min(n_in - 1, static_cast<int>(std::ceil(end)) - 1);
    BoxSpan& s = spans[j];
    s.first = first;
    s.weights.resize(last - first + 1);
    for (int i = first; i <= last; ++i) {
      const double w =
          std::min(end, static_cast<double>(i + 1)) - std::max(start, static_cast<double>(i));
      s.weights[i - first] = std::max(0.0, w);
    }
  }
  return spans;
}

}  // namespace detail

// Noiseless linear-intensity render; full scale is 1.0.
inline IrisImage render_base(const DieLayout& layout, const OpticalConfig& config,
                             const SpectralCurve& absorption,
                             const SpectralCurve& sensitivity) {
  config.validate();
  if (layout.grid_pitch_um > config.microns_per_pixel + 1e-12) {
    throw ConfigError(
        "render: pixel pitch finer than layout grid would invent detail "
        "(grid " +
        std::to_string(layout.grid_pitch_um) + " um, pixel " +
        std::to_string(config.microns_per_pixel) + " um)");
  }
  const int width_px =
      static_cast<int>(std::floor(layout.die_w_um / config.microns_per_pixel + 1e-9));
  const int height_px =
      static_cast<int>(std::floor(layout.die_h_um / config.microns_per_pixel + 1e-9));
  if (width_px < 1 || height_px < 1) {
    throw ConfigError("render: pixel pitch larger than the die");
  }
  const SignalBudget budget = signal_budget(config, absorption, sensitivity, 1.0);

  // Illuminated reflectance at grid resolution.
  const auto terms = detail::field_terms(config, layout.die_w_um, layout.die_h_um,
                                         layout.grid_pitch_um, layout.nx, layout.ny);
  std::vector<float> work(layout.reflectance.size());
  for (int row = 0; row < layout.ny; ++row) {
    const double rt = terms.row_term[row];
    const std::size_t base = static_cast<std::size_t>(row) * layout.nx;
    for (int col = 0; col < layout.nx; ++col) {
      const double field = std::max(kIlluminationFloor, terms.col_term[col] + rt);
      work[base + col] = static_cast<float>(field * layout.reflectance[base + col]);
    }
  }

  // PSF blur.
  const PsfKernel k = psf_kernel(config, layout.grid_pitch_um);
  std::vector<float> tmp(work.size());
  detail::blur_pass_horizontal(work, layout.nx, layout.ny, k.taps, k.radius, tmp);
  detail::blur_pass_vertical(tmp, layout.nx, layout.ny, k.taps, k.radius, work);
  tmp.clear();
  tmp.shrink_to_fit();

  // Area-average down to the sensor grid, then expose.
  const double ratio = config.microns_per_pixel / layout.grid_pitch_um;
  const auto col_spans = detail::box_spans(width_px, ratio, layout.nx);
  const auto row_spans = detail::box_spans(height_px, ratio, layout.ny);
  const double scale = config.gain * config.exposure_s * budget.combined;

  // Horizontal pass at full grid height.
  std::vector<double> horiz(static_cast<std::size_t>(layout.ny) * width_px);
  for (int row = 0; row < layout.ny; ++row) {
    const float* src = work.data() + static_cast<std::size_t>(row) * layout.nx;
    double* dst = horiz.data() + static_cast<std::size_t>(row) * width_px;
    for (int j = 0; j < width_px; ++j) {
      const detail::BoxSpan& s = col_spans[j];
      double acc = 0.0;
      double w = 0.0;
      for (std::size_t i = 0; i < s.weights.size(); ++i) {
        acc += s.weights[i] * src[s.first + static_cast<int>(i)];
        w += s.weights[i];
      }
      dst[j] = acc / w;
    }
  }

  IrisImage image(width_px, height_px, config.microns_per_pixel);
  for (int r = 0; r < height_px; ++r) {
    const detail::BoxSpan& s = row_spans[r];
    for (int j = 0; j < width_px; ++j) {
      double acc = 0.0;
      double w = 0.0;
      for (std::size_t i = 0; i < s.weights.size(); ++i) {
        acc += s.weights[i] * horiz[(s.first + i) * width_px + j];
        w += s.weights[i];
      }
      image.at(r, j) = scale * (acc / w);
    }
  }

  image.metadata = {{"config", to_json(config)},
                    {"seed", config.seed},
                    {"layout_provenance", layout.provenance},
                    {"quantized", false}};
  return image;
}

// Gaussian read noise plus optional signal-proportional variance, in
// linear full-scale units. Deterministic for a given seed.
inline void apply_noise(IrisImage& image, const NoiseParams& noise,
                        std::uint64_t seed) {
  noise.validate();
  if (!noise.enabled) return;
  Rng rng(seed);
  for (double& p : image.pixels) {
    double variance = noise.read_noise_sigma * noise.read_noise_sigma;
    if (noise.shot_noise) variance += std::max(p, 0.0) / kShotNoiseFullWell;
    p += std::sqrt(variance) * rng.gaussian();
  }
  image.metadata["noise_seed"] = seed;
}

// Full pipeline: noiseless base, noise stream seeded from config.seed,
// 16-bit quantization.
inline IrisImage render(const DieLayout& layout, const OpticalConfig& config,
                        const SpectralCurve& absorption,
                        const SpectralCurve& sensitivity) {
  IrisImage image = render_base(layout, config, absorption, sensitivity);
  apply_noise(image, config.noise, derive_seed(config.seed, "render-noise"));
  quantize_image(image);
  return image;
}

// Rescales a linear render so the given percentile hits `target` of full
// scale. Returns the factor applied.
inline double auto_expose(IrisImage& image, double percentile = 0.99,
                          double target = 0.8) {
  if (image.pixels.empty()) return 1.0;
  std::vector<double> sorted = image.pixels;
  const auto nth = static_cast<std::size_t>(
      std::min<double>(static_cast<double>(sorted.size() - 1),
                       percentile * static_cast<double>(sorted.size())));
  std::nth_element(sorted.begin(), sorted.begin() + nth, sorted.end());
  const double p = sorted[nth];
  if (!(p > 0.0)) return 1.0;
  const double factor = target / p;
  for (double& v : image.pixels) v *= factor;
  return factor;
}

struct CapturedTile {
  IrisImage image;
  int grid_row = 0;
  int grid_col = 0;
  int nominal_x = 0;  // pixel offset of the tile origin in the full frame
  int nominal_y = 0;
  int true_x = 0;  // nominal + seeded jitter; what the stage actually did
  int true_y = 0;
};

// Overlapping tile captures across the die. Tiles share one illumination
// field and differ only in their noise streams; true offsets carry the
// seeded stage jitter that stitching must recover.
inline std::vector<CapturedTile> capture_tiles(
    const DieLayout& layout, const OpticalConfig& config,
    const SpectralCurve& absorption, const SpectralCurve& sensitivity,
    int tile_px, int overlap_px, int jitter_px, std::uint64_t seed) {
  if (overlap_px < 8) {
    throw ConfigError("capture_tiles: overlap must be >= 8 px");
  }
  if (!(jitter_px >= 0) || 2 * jitter_px >= overlap_px) {
    throw ConfigError("capture_tiles: jitter must satisfy 0 <= 2*jitter < overlap");
  }
  IrisImage base = render_base(layout, config, absorption, sensitivity);
  if (tile_px > base.width || tile_px > base.height) {
    throw ConfigError("capture_tiles: tile larger than the rendered die (" +
                      std::to_string(base.width) + "x" +
                      std::to_string(base.height) + " px)");
  }
  const auto grid_positions = [&](int extent) {
    std::vector<int> xs;
    const int step = tile_px - overlap_px;
    for (int x = 0; x + tile_px < extent; x += step) xs.push_back(x);
    const int last = extent - tile_px;
    if (xs.empty() || xs.back() != last) xs.push_back(last);
    return xs;
  };
  const std::vector<int> xs = grid_positions(base.width);
  const std::vector<int> ys = grid_positions(base.height);

  const std::uint64_t jitter_seed = derive_seed(seed, "tile-jitter");
  const std::uint64_t noise_seed = derive_seed(seed, "tile-noise");
  std::vector<CapturedTile> tiles;
  tiles.reserve(xs.size() * ys.size());
  std::size_t index = 0;
  for (std::size_t gy = 0; gy < ys.size(); ++gy) {
    for (std::size_t gx = 0; gx < xs.size(); ++gx, ++index) {
      CapturedTile t;
      t.grid_row = static_cast<int>(gy);
      t.grid_col = static_cast<int>(gx);
      t.nominal_x = xs[gx];
      t.nominal_y = ys[gy];
      Rng rng(mix64(jitter_seed, index));
      // Edge rows/columns stay pinned in their edge axis so the union of
      // footprints always covers the frame.
      const bool edge_x = gx == 0 || gx + 1 == xs.size();
      const bool edge_y = gy == 0 || gy + 1 == ys.size();
      const int jx = (jitter_px == 0 || edge_x)
                         ? 0
                         : static_cast<int>(rng.uniform_int(-jitter_px, jitter_px));
      const int jy = (jitter_px == 0 || edge_y)
                         ? 0
                         : static_cast<int>(rng.uniform_int(-jitter_px, jitter_px));
      t.true_x = std::clamp(t.nominal_x + jx, 0, base.width - tile_px);
      t.true_y = std::clamp(t.nominal_y + jy, 0, base.height - tile_px);
      t.image = crop(base, t.true_y, t.true_x, tile_px, tile_px);
      apply_noise(t.image, config.noise, mix64(noise_seed, index));
      quantize_image(t.image);
      t.image.metadata["tile"] = {{"grid", {t.grid_row, t.grid_col}},
                                  {"nominal_px", {t.nominal_x, t.nominal_y}},
                                  {"true_px", {t.true_x, t.true_y}}};
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

}  // namespace iris

#endif  // IRIS_IMAGER_HPP_
