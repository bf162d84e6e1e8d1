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

#ifndef IRIS_IMAGE_HPP_
#define IRIS_IMAGE_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iris/errors.hpp"
#include "iris/fsio.hpp"
#include "iris/pgm.hpp"

namespace iris {

// Full scale of the 16-bit wire format; 1.0 in linear pre-quantization units.
inline constexpr double kFullScale16 = 65535.0;

// A 2-D intensity raster. Pixels hold linear intensity while a render is in
// flight (full scale = 1.0) and integer values 0..65535 once quantized.
// Row 0 is the top of the die; micron coordinates have y pointing up, so
// row r spans y in [(height-1-r)*mpp, (height-r)*mpp).
struct IrisImage {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;  // row-major
  double microns_per_pixel = 1.0;
  nlohmann::json metadata = nlohmann::json::object();

  IrisImage() = default;
  IrisImage(int w, int h, double mpp, double fill = 0.0)
      : width(w),
        height(h),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill),
        microns_per_pixel(mpp) {
    if (w < 1 || h < 1) throw DomainError("image: dimensions must be >= 1x1");
    if (!(mpp > 0.0)) throw DomainError("image: microns per pixel must be > 0");
  }

  double& at(int row, int col) {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  double at(int row, int col) const {
    return pixels[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return pixels.size(); }
};

// Saturating 16-bit quantization; values above full scale clamp, never wrap.
inline std::uint16_t quantize_u16(double linear) {
  if (!(linear > 0.0)) return 0;
  if (linear >= 1.0) return 65535;
  return static_cast<std::uint16_t>(std::lround(linear * kFullScale16));
}

inline void quantize_image(IrisImage& image) {
  for (double& p : image.pixels) {
    p = static_cast<double>(quantize_u16(p));
  }
  image.metadata["quantized"] = true;
}

inline double image_min(const IrisImage& image) {
  double m = image.pixels.empty() ? 0.0 : image.pixels[0];
  for (double p : image.pixels) m = std::min(m, p);
  return m;
}

inline double image_max(const IrisImage& image) {
  double m = image.pixels.empty() ? 0.0 : image.pixels[0];
  for (double p : image.pixels) m = std::max(m, p);
  return m;
}

inline double image_mean(const IrisImage& image) {
  double sum = 0.0;
  for (double p : image.pixels) sum += p;
  return image.pixels.empty() ? 0.0 : sum / static_cast<double>(image.pixels.size());
}

inline IrisImage crop(const IrisImage& image, int row0, int col0, int h, int w) {
  if (row0 < 0 || col0 < 0 || row0 + h > image.height || col0 + w > image.width) {
    throw DomainError("crop: window extends outside the image");
  }
  IrisImage out(w, h, image.microns_per_pixel);
  out.metadata = image.metadata;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out.at(r, c) = image.at(row0 + r, col0 + c);
    }
  }
  return out;
}

inline std::filesystem::path image_sidecar_path(const std::filesystem::path& pgm_path) {
  std::filesystem::path p = pgm_path;
  p.replace_extension(".json");
  return p;
}

// Quantized values go to a 16-bit PGM; scale and provenance ride in a JSON
// sidecar next to it. Images still in linear units quantize on the way out.
inline void save_image(const IrisImage& image, const std::filesystem::path& pgm_path) {
  const bool quantized = image.metadata.value("quantized", false);
  std::vector<std::uint16_t> samples(image.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double v = image.pixels[i];
    samples[i] = quantized
                     ? static_cast<std::uint16_t>(
                           std::clamp(v, 0.0, kFullScale16))
                     : quantize_u16(v);
  }
  write_pgm16(pgm_path, image.width, image.height, samples);
  nlohmann::json sidecar = {{"microns_per_pixel", image.microns_per_pixel},
                            {"width_px", image.width},
                            {"height_px", image.height},
                            {"metadata", image.metadata}};
  atomic_write_file(image_sidecar_path(pgm_path), sidecar.dump(2) + "\n");
}

// Loads a 16-bit PGM plus its sidecar. A missing sidecar is tolerated for
// hand-made inputs; scale then defaults to 1 um/px.
inline IrisImage load_image(const std::filesystem::path& pgm_path) {
  const PgmRaster raster = read_pgm16(pgm_path);
  IrisImage image(raster.width, raster.height, 1.0);
  for (std::size_t i = 0; i < raster.samples.size(); ++i) {
    image.pixels[i] = static_cast<double>(raster.samples[i]);
  }
  const auto sidecar = image_sidecar_path(pgm_path);
  if (std::filesystem::exists(sidecar)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file_bytes(sidecar));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(sidecar.string() + ": " + e.what());
    }
    image.microns_per_pixel = j.value("microns_per_pixel", 1.0);
    if (j.contains("metadata")) image.metadata = j.at("metadata");
  }
  image.metadata["quantized"] = true;
  return image;
}

}  // namespace iris

#endif  // IRIS_IMAGE_HPP_
