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
// Procedural die layouts: a per-micron reflectance grid standing in for the
// lowest-metal routing density, plus annotated functional regions. Layouts
// are immutable after construction; every operation returns a new value.

#ifndef IRIS_LAYOUT_HPP_
#define IRIS_LAYOUT_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iris/errors.hpp"
#include "iris/fsio.hpp"
#include "iris/pgm.hpp"
#include "iris/rng.hpp"

namespace iris {

enum class BlockKind {
  kStandardCell,
  kRamMacro,
  kIoPad,
  kDataConverter,
  kNonVolatileMemory,
  kOscillator,
  kFiller,
};

inline const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::kStandardCell: return "standard_cell";
    case BlockKind::kRamMacro: return "ram_macro";
    case BlockKind::kIoPad: return "io_pad";
    case BlockKind::kDataConverter: return "data_converter";
    case BlockKind::kNonVolatileMemory: return "non_volatile_memory";
    case BlockKind::kOscillator: return "oscillator";
    case BlockKind::kFiller: return "filler";
  }
  return "unknown";
}

inline BlockKind block_kind_from_string(const std::string& s) {
  if (s == "standard_cell") return BlockKind::kStandardCell;
  if (s == "ram_macro") return BlockKind::kRamMacro;
  if (s == "io_pad") return BlockKind::kIoPad;
  if (s == "data_converter") return BlockKind::kDataConverter;
  if (s == "non_volatile_memory") return BlockKind::kNonVolatileMemory;
  if (s == "oscillator") return BlockKind::kOscillator;
  if (s == "filler") return BlockKind::kFiller;
  throw ParseError("unknown block kind '" + s + "'");
}

// Kind-specific texture knobs. Unused fields are ignored by other kinds.
struct TextureParams {
  double cell_row_pitch_um = 0.8;   // standard-cell row height
  double bit_cell_pitch_um = 2.0;   // RAM / NVM lattice period
  double pad_diameter_um = 40.0;    // I/O pad disc
  double channel_pitch_um = 12.0;   // data-converter channel period
  double base_reflectance = 0.45;
  double contrast = 0.35;
};

struct Region {
  BlockKind kind = BlockKind::kStandardCell;
  double origin_x_um = 0.0;  // lower-left corner, y up
  double origin_y_um = 0.0;
  double width_um = 0.0;
  double height_um = 0.0;
  TextureParams texture;

  bool contains(double x_um, double y_um) const {
    return x_um >= origin_x_um && x_um < origin_x_um + width_um &&
           y_um >= origin_y_um && y_um < origin_y_um + height_um;
  }

  bool overlaps(const Region& other) const {
    return origin_x_um < other.origin_x_um + other.width_um &&
           other.origin_x_um < origin_x_um + width_um &&
           origin_y_um < other.origin_y_um + other.height_um &&
           other.origin_y_um < origin_y_um + height_um;
  }
};

// Optional low-amplitude diagonal stripes crossing the whole die, mimicking
// surface texture left by wafer processing. Off by default.
struct DiagonalTexture {
  bool enabled = false;
  double amplitude = 0.03;
  double period_um = 40.0;
};

struct SynthPlan {
  double die_w_um = 0.0;
  double die_h_um = 0.0;
  double grid_pitch_um = 0.25;
  double background_reflectance = 0.2;
  // Local routing-density variation layered over every block. Besides
  // looking right, it guarantees each imaged tile carries enough intensity
  // structure for correlation-based comparison. The default amplitude puts
  // per-tile variance far enough above the sensor noise that comparison
  // scores are decisive in both directions.
  double mottle_amplitude = 0.18;
  double mottle_cell_um = 4.0;
  DiagonalTexture diagonal;
  std::vector<Region> regions;
  std::string provenance;
};

inline int grid_dim(double extent_um, double pitch_um) {
  return static_cast<int>(std::ceil(extent_um / pitch_um - 1e-9));
}

struct DieLayout {
  double die_w_um = 0.0;
  double die_h_um = 0.0;
  double grid_pitch_um = 0.25;
  int nx = 0;  // columns = ceil(die_w / pitch)
  int ny = 0;  // rows = ceil(die_h / pitch); row 0 is the top of the die
  std::vector<float> reflectance;  // row-major fractions in [0, 1]
  std::vector<Region> regions;
  std::string provenance;

  float& refl(int row, int col) {
    return reflectance[static_cast<std::size_t>(row) * nx + col];
  }
  float refl(int row, int col) const {
    return reflectance[static_cast<std::size_t>(row) * nx + col];
  }

  // Sample centers in die coordinates (y up).
  double x_of_col(int col) const { return (col + 0.5) * grid_pitch_um; }
  double y_of_row(int row) const { return (ny - row - 0.5) * grid_pitch_um; }

  double mean_reflectance() const {
    double sum = 0.0;
    for (float r : reflectance) sum += r;
    return reflectance.empty() ? 0.0 : sum / static_cast<double>(reflectance.size());
  }
};

inline void validate_plan(const SynthPlan& plan) {
  if (!(plan.die_w_um > 0.0 && plan.die_h_um > 0.0)) {
    throw ValidationError("plan: die size must be positive");
  }
  if (!(plan.grid_pitch_um > 0.0)) {
    throw ValidationError("plan: grid pitch must be positive");
  }
  if (!(plan.background_reflectance >= 0.0 && plan.background_reflectance <= 1.0)) {
    throw ValidationError("plan: background reflectance must be in [0, 1]");
  }
  std::ostringstream bad;
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    const Region& r = plan.regions[i];
    if (!(r.width_um > 0.0 && r.height_um > 0.0)) {
      bad << " region " << i << " (" << to_string(r.kind) << "): empty size;";
      continue;
    }
    if (r.origin_x_um < -1e-9 || r.origin_y_um < -1e-9 ||
        r.origin_x_um + r.width_um > plan.die_w_um + 1e-9 ||
        r.origin_y_um + r.height_um > plan.die_h_um + 1e-9) {
      bad << " region " << i << " (" << to_string(r.kind) << "): outside die;";
    }
    for (std::size_t j = i + 1; j < plan.regions.size(); ++j) {
      if (r.overlaps(plan.regions[j])) {
        bad << " regions " << i << " and " << j << " overlap;";
      }
    }
  }
  const std::string problems = bad.str();
  if (!problems.empty()) {
    throw ValidationError("plan validation failed:" + problems);
  }
}

namespace detail {

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline double fract(double v) { return v - std::floor(v); }

// Texture generators take coordinates local to the region (lower-left
// origin) and hash everything through (seed, region index, ...) so the
// result is independent of rasterization order.
inline double texture_value(const Region& region, std::size_t region_idx,
                            double lx, double ly, std::uint64_t seed) {
  const TextureParams& t = region.texture;
  const double base = t.base_reflectance;
  const double amp = t.contrast;
  switch (region.kind) {
    case BlockKind::kStandardCell: {
      const auto row = static_cast<std::uint64_t>(ly / t.cell_row_pitch_um);
      const double seg_len = 2.0 * t.cell_row_pitch_um;
      const auto seg = static_cast<std::uint64_t>(lx / seg_len);
      const double row_base =
          base + (hash_unit(seed, region_idx, row) - 0.5) * amp;
      const double cell =
          (hash_unit(seed, region_idx, row, seg + 1) - 0.5) * amp * 0.6;
      return clamp01(row_base + cell);
    }
    case BlockKind::kRamMacro: {
      const double px = fract(lx / t.bit_cell_pitch_um);
      const double py = fract(ly / t.bit_cell_pitch_um);
      const bool wall = px < 0.35 || py < 0.35;
      const double strip_h = 2.0 * t.bit_cell_pitch_um;
      if (ly < strip_h) {
        // Sense-amp strip along the bottom edge: same column period,
        // distinctly brighter.
        return clamp01(base + 0.35 * amp + (px < 0.35 ? amp : 0.0));
      }
      return clamp01(base + (wall ? amp : -0.6 * amp));
    }
    case BlockKind::kIoPad: {
      const double cx = region.width_um / 2.0;
      const double cy = region.height_um / 2.0;
      const double rr = t.pad_diameter_um / 2.0;
      const double d2 = (lx - cx) * (lx - cx) + (ly - cy) * (ly - cy);
      return d2 <= rr * rr ? clamp01(base + amp) : clamp01(base - 0.3 * amp);
    }
    case BlockKind::kDataConverter: {
      const auto channel = static_cast<std::uint64_t>(lx / t.channel_pitch_um);
      const double channel_base =
          base + (hash_unit(seed, region_idx, channel) - 0.5) * amp * 0.5;
      const double py = fract(ly / (0.25 * t.channel_pitch_um));
      return clamp01(channel_base + (py < 0.4 ? 0.6 * amp : -0.3 * amp));
    }
    case BlockKind::kNonVolatileMemory: {
      const double pitch = 0.6 * t.bit_cell_pitch_um;
      const double px = fract(lx / pitch);
      const double py = fract(ly / pitch);
      const bool wall = px < 0.4 || py < 0.4;
      return clamp01(base + 0.05 + (wall ? 0.8 * amp : -0.5 * amp));
    }
    case BlockKind::kOscillator:
      return clamp01(base + 0.3 * amp);
    case BlockKind::kFiller: {
      // Waffle power grid: bright lines on a dark field.
      const double wp = 8.0;
      const double lw = 1.2;
      const bool line = std::fmod(lx, wp) < lw || std::fmod(ly, wp) < lw;
      return line ? clamp01(base + amp) : clamp01(base - 0.7 * amp);
    }
  }
  return base;
}

}  // namespace detail

// Deterministic rasterization of a region plan. Identical (plan, seed)
// pairs produce bit-identical grids.
inline DieLayout synthesize_layout(const SynthPlan& plan, std::uint64_t seed) {
  validate_plan(plan);
  DieLayout layout;
  layout.die_w_um = plan.die_w_um;
  layout.die_h_um = plan.die_h_um;
  layout.grid_pitch_um = plan.grid_pitch_um;
  layout.nx = grid_dim(plan.die_w_um, plan.grid_pitch_um);
  layout.ny = grid_dim(plan.die_h_um, plan.grid_pitch_um);
  layout.regions = plan.regions;
  layout.provenance = plan.provenance.empty()
                          ? "synthesized, seed " + std::to_string(seed)
                          : plan.provenance + "; seed " + std::to_string(seed);
  layout.reflectance.assign(
      static_cast<std::size_t>(layout.nx) * static_cast<std::size_t>(layout.ny),
      static_cast<float>(plan.background_reflectance));

  const std::uint64_t texture_seed = derive_seed(seed, "layout-texture");
  for (std::size_t i = 0; i < plan.regions.size(); ++i) {
    const Region& region = plan.regions[i];
    const int col0 = std::max(0, static_cast<int>(region.origin_x_um / plan.grid_pitch_um));
    const int col1 = std::min(layout.nx, grid_dim(region.origin_x_um + region.width_um,
                                                  plan.grid_pitch_um));
    for (int row = 0; row < layout.ny; ++row) {
      const double y = layout.y_of_row(row);
      if (y < region.origin_y_um || y >= region.origin_y_um + region.height_um) {
        continue;
      }
      for (int col = col0; col < col1; ++col) {
        const double x = layout.x_of_col(col);
        if (!region.contains(x, y)) continue;
        const double v = detail::texture_value(region, i, x - region.origin_x_um,
                                               y - region.origin_y_um, texture_seed);
        layout.refl(row, col) = static_cast<float>(v);
      }
    }
  }

  if (plan.mottle_amplitude > 0.0) {
    const std::uint64_t mottle_seed = derive_seed(seed, "layout-mottle");
    for (int row = 0; row < layout.ny; ++row) {
      const auto cell_y = static_cast<std::uint64_t>(layout.y_of_row(row) /
                                                     plan.mottle_cell_um);
      for (int col = 0; col < layout.nx; ++col) {
        const auto cell_x = static_cast<std::uint64_t>(layout.x_of_col(col) /
                                                       plan.mottle_cell_um);
        const double v = layout.refl(row, col) +
                         (hash_unit(mottle_seed, cell_x, cell_y) - 0.5) *
                             plan.mottle_amplitude;
        layout.refl(row, col) = static_cast<float>(detail::clamp01(v));
      }
    }
  }

  if (plan.diagonal.enabled) {
    const double k = 2.0 * std::numbers::pi / plan.diagonal.period_um;
    for (int row = 0; row < layout.ny; ++row) {
      const double y = layout.y_of_row(row);
      for (int col = 0; col < layout.nx; ++col) {
        const double x = layout.x_of_col(col);
        const double s = (x + y) * std::numbers::sqrt2 / 2.0;
        const double v = layout.refl(row, col) +
                         plan.diagonal.amplitude * std::sin(k * s);
        layout.refl(row, col) = static_cast<float>(detail::clamp01(v));
      }
    }
  }
  return layout;
}

// Returns a copy with a square patch (side = sqrt(area)) of reflectance
// shifted by `delta`, clamped to [0, 1]. The input layout is untouched.
inline DieLayout inject_trojan(const DieLayout& layout, double center_x_um,
                               double center_y_um, double area_um2,
                               double reflectance_delta) {
  if (!(area_um2 >= 0.0)) {
    throw DomainError("inject_trojan: area must be >= 0 um^2");
  }
  if (center_x_um < 0.0 || center_x_um > layout.die_w_um || center_y_um < 0.0 ||
      center_y_um > layout.die_h_um) {
    std::ostringstream msg;
    msg << "inject_trojan: center (" << center_x_um << ", " << center_y_um
        << ") um outside die " << layout.die_w_um << " x " << layout.die_h_um
        << " um";
    throw ValidationError(msg.str());
  }
  DieLayout out = layout;
  if (area_um2 == 0.0) return out;
  const double side = std::sqrt(area_um2);
  const double x0 = center_x_um - side / 2.0;
  const double x1 = center_x_um + side / 2.0;
  const double y0 = center_y_um - side / 2.0;
  const double y1 = center_y_um + side / 2.0;
  if (x0 < -1e-9 || y0 < -1e-9 || x1 > layout.die_w_um + 1e-9 ||
      y1 > layout.die_h_um + 1e-9) {
    std::ostringstream msg;
    msg << "inject_trojan: patch [" << x0 << ", " << x1 << "] x [" << y0
        << ", " << y1 << "] um extends outside the die";
    throw ValidationError(msg.str());
  }
  for (int row = 0; row < out.ny; ++row) {
    const double y = out.y_of_row(row);
    if (y < y0 || y >= y1) continue;
    for (int col = 0; col < out.nx; ++col) {
      const double x = out.x_of_col(col);
      if (x < x0 || x >= x1) continue;
      out.refl(row, col) = static_cast<float>(
          detail::clamp01(out.refl(row, col) + reflectance_delta));
    }
  }
  std::ostringstream note;
  note << "; modified " << area_um2 << " um^2 at (" << center_x_um << ", "
       << center_y_um << ") um, delta " << reflectance_delta;
  out.provenance += note.str();
  return out;
}

enum class ScaleClass { kMicro, kMeso, kMacro };

inline const char* to_string(ScaleClass s) {
  switch (s) {
    case ScaleClass::kMicro: return "micro";
    case ScaleClass::kMeso: return "meso";
    case ScaleClass::kMacro: return "macro";
  }
  return "unknown";
}

inline constexpr double kDefaultMicroThresholdPx = 2.0;
inline constexpr double kDefaultMacroThresholdPx = 50.0;

// Size-scale taxonomy relative to the imaging pitch: below `micro_px`
// pixels a feature is unresolvable, above `macro_px` it is enumerable.
inline ScaleClass classify_scale(double feature_size_um,
                                 double microns_per_pixel,
                                 double micro_px = kDefaultMicroThresholdPx,
                                 double macro_px = kDefaultMacroThresholdPx) {
  if (!(feature_size_um > 0.0) || !(microns_per_pixel > 0.0) ||
      !(micro_px > 0.0) || !(macro_px > 0.0)) {
    throw DomainError("classify_scale: all inputs must be positive");
  }
  if (!(micro_px < macro_px)) {
    throw DomainError("classify_scale: micro threshold must be below macro");
  }
  if (feature_size_um < micro_px * microns_per_pixel) return ScaleClass::kMicro;
  if (feature_size_um >= macro_px * microns_per_pixel) return ScaleClass::kMacro;
  return ScaleClass::kMeso;
}

inline nlohmann::json to_json(const TextureParams& t) {
  return {{"cell_row_pitch_um", t.cell_row_pitch_um},
          {"bit_cell_pitch_um", t.bit_cell_pitch_um},
          {"pad_diameter_um", t.pad_diameter_um},
          {"channel_pitch_um", t.channel_pitch_um},
          {"base_reflectance", t.base_reflectance},
          {"contrast", t.contrast}};
}

inline TextureParams texture_from_json(const nlohmann::json& j) {
  TextureParams t;
  t.cell_row_pitch_um = j.value("cell_row_pitch_um", t.cell_row_pitch_um);
  t.bit_cell_pitch_um = j.value("bit_cell_pitch_um", t.bit_cell_pitch_um);
  t.pad_diameter_um = j.value("pad_diameter_um", t.pad_diameter_um);
  t.channel_pitch_um = j.value("channel_pitch_um", t.channel_pitch_um);
  t.base_reflectance = j.value("base_reflectance", t.base_reflectance);
  t.contrast = j.value("contrast", t.contrast);
  return t;
}

inline nlohmann::json to_json(const Region& r) {
  return {{"kind", to_string(r.kind)},
          {"origin_um", {r.origin_x_um, r.origin_y_um}},
          {"size_um", {r.width_um, r.height_um}},
          {"texture", to_json(r.texture)}};
}

inline Region region_from_json(const nlohmann::json& j) {
  Region r;
  r.kind = block_kind_from_string(j.at("kind").get<std::string>());
  r.origin_x_um = j.at("origin_um").at(0).get<double>();
  r.origin_y_um = j.at("origin_um").at(1).get<double>();
  r.width_um = j.at("size_um").at(0).get<double>();
  r.height_um = j.at("size_um").at(1).get<double>();
  if (j.contains("texture")) r.texture = texture_from_json(j.at("texture"));
  return r;
}

inline nlohmann::json to_json(const SynthPlan& plan) {
  nlohmann::json regions = nlohmann::json::array();
  for (const Region& r : plan.regions) regions.push_back(to_json(r));
  return {{"die_size_um", {plan.die_w_um, plan.die_h_um}},
          {"grid_pitch_um", plan.grid_pitch_um},
          {"background_reflectance", plan.background_reflectance},
          {"mottle_amplitude", plan.mottle_amplitude},
          {"mottle_cell_um", plan.mottle_cell_um},
          {"diagonal_texture",
           {{"enabled", plan.diagonal.enabled},
            {"amplitude", plan.diagonal.amplitude},
            {"period_um", plan.diagonal.period_um}}},
          {"provenance", plan.provenance},
          {"regions", regions}};
}

inline SynthPlan plan_from_json(const nlohmann::json& j) {
  SynthPlan plan;
  plan.die_w_um = j.at("die_size_um").at(0).get<double>();
  plan.die_h_um = j.at("die_size_um").at(1).get<double>();
  plan.grid_pitch_um = j.value("grid_pitch_um", plan.grid_pitch_um);
  plan.background_reflectance =
      j.value("background_reflectance", plan.background_reflectance);
  plan.mottle_amplitude = j.value("mottle_amplitude", plan.mottle_amplitude);
  plan.mottle_cell_um = j.value("mottle_cell_um", plan.mottle_cell_um);
  if (j.contains("diagonal_texture")) {
    const auto& d = j.at("diagonal_texture");
    plan.diagonal.enabled = d.value("enabled", false);
    plan.diagonal.amplitude = d.value("amplitude", plan.diagonal.amplitude);
    plan.diagonal.period_um = d.value("period_um", plan.diagonal.period_um);
  }
  plan.provenance = j.value("provenance", std::string());
  if (j.contains("regions")) {
    for (const auto& rj : j.at("regions")) {
      plan.regions.push_back(region_from_json(rj));
    }
  }
  return plan;
}

inline SynthPlan load_plan(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_bytes(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return plan_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// On disk a layout is a JSON document plus a named 16-bit PGM sidecar
// holding reflectance scaled by 65535.
inline void save_layout(const DieLayout& layout,
                        const std::filesystem::path& json_path) {
  std::filesystem::path pgm_path = json_path;
  pgm_path.replace_extension(".pgm");
  std::vector<std::uint16_t> samples(layout.reflectance.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<std::uint16_t>(
        std::lround(static_cast<double>(layout.reflectance[i]) * 65535.0));
  }
  write_pgm16(pgm_path, layout.nx, layout.ny, samples);

  nlohmann::json regions = nlohmann::json::array();
  for (const Region& r : layout.regions) regions.push_back(to_json(r));
  const nlohmann::json j = {{"die_size_um", {layout.die_w_um, layout.die_h_um}},
                            {"grid_pitch_um", layout.grid_pitch_um},
                            {"provenance", layout.provenance},
                            {"reflectance_pgm", pgm_path.filename().string()},
                            {"regions", regions}};
  atomic_write_file(json_path, j.dump(2) + "\n");
}

inline DieLayout load_layout(const std::filesystem::path& json_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file_bytes(json_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }
  DieLayout layout;
  try {
    layout.die_w_um = j.at("die_size_um").at(0).get<double>();
    layout.die_h_um = j.at("die_size_um").at(1).get<double>();
    layout.grid_pitch_um = j.at("grid_pitch_um").get<double>();
    layout.provenance = j.value("provenance", std::string());
    for (const auto& rj : j.value("regions", nlohmann::json::array())) {
      layout.regions.push_back(region_from_json(rj));
    }
    layout.nx = grid_dim(layout.die_w_um, layout.grid_pitch_um);
    layout.ny = grid_dim(layout.die_h_um, layout.grid_pitch_um);

    const std::string pgm_name = j.at("reflectance_pgm").get<std::string>();
    const std::filesystem::path pgm_path = json_path.parent_path() / pgm_name;
    const PgmRaster raster = read_pgm16(pgm_path);
    if (raster.width != layout.nx || raster.height != layout.ny) {
      std::ostringstream msg;
      msg << pgm_path.string() << ": raster is " << raster.width << "x"
          << raster.height << " but the die grid is " << layout.nx << "x"
          << layout.ny;
      throw ParseError(msg.str());
    }
    layout.reflectance.resize(raster.samples.size());
    for (std::size_t i = 0; i < raster.samples.size(); ++i) {
      layout.reflectance[i] = static_cast<float>(raster.samples[i] / 65535.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(json_path.string() + ": " + e.what());
  }
  return layout;
}

}  // namespace iris

#endif  // IRIS_LAYOUT_HPP_
