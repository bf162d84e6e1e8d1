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
// Reference-vs-sample comparison. Images are scored tile by tile with
// normalized cross-correlation (robust to the exposure differences this
// imaging mode inherently has); flat tiles fall back to an absolute
// difference test. Failing tiles cluster into anomaly regions.

#ifndef IRIS_VERIFY_HPP_
#define IRIS_VERIFY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iris/errors.hpp"
#include "iris/image.hpp"

namespace iris {

struct CompareParams {
  int tile_size_px = 16;
  double ncc_threshold = 0.85;
  double min_anomaly_area_um2 = 9.0;
  // Tiles whose variance (in either image) is below this fraction of the
  // squared dynamic range carry no texture; NCC is undefined there.
  double variance_floor_frac = 1e-4;
  // Flat tiles pass if mean |difference| stays below this fraction of the
  // dynamic range.
  double mad_tolerance_frac = 0.025;

  void validate() const {
    if (tile_size_px < 2) throw ConfigError("compare: tile size must be >= 2 px");
    if (!(ncc_threshold > -1.0 && ncc_threshold <= 1.0)) {
      throw ConfigError("compare: ncc threshold must be in (-1, 1]");
    }
    if (!(min_anomaly_area_um2 >= 0.0)) {
      throw ConfigError("compare: min anomaly area must be >= 0");
    }
  }
};

struct TileScore {
  int row = 0, col = 0;      // tile grid coordinates
  double ncc = 0.0;          // valid when flat == false
  double mean_abs_diff = 0.0;
  bool flat = false;
  bool pass = true;
  // Single comparable number: NCC for textured tiles, a difference-based
  // stand-in on flat tiles.
  double score() const {
    return flat ? 1.0 - mean_abs_diff / kFullScale16 : ncc;
  }
};

struct AnomalyRegion {
  int min_tile_row = 0, min_tile_col = 0;
  int max_tile_row = 0, max_tile_col = 0;
  double bbox_x0_um = 0.0, bbox_y0_um = 0.0;  // y up, die frame
  double bbox_x1_um = 0.0, bbox_y1_um = 0.0;
  double area_um2 = 0.0;  // tile count x (tile size x um/px)^2
  int tile_count = 0;
  double worst_score = 1.0;

  bool contains_um(double x_um, double y_um) const {
    return x_um >= bbox_x0_um && x_um <= bbox_x1_um && y_um >= bbox_y0_um &&
           y_um <= bbox_y1_um;
  }
};

struct ComparisonReport {
  int tile_size_px = 0;
  int grid_rows = 0, grid_cols = 0;
  double microns_per_pixel = 0.0;
  int image_width_px = 0, image_height_px = 0;
  std::vector<TileScore> tiles;  // row-major
  double confidence = 0.0;       // passing tiles / total tiles
  std::vector<AnomalyRegion> anomalies;
  CompareParams params;

  const TileScore& tile(int r, int c) const {
    return tiles[static_cast<std::size_t>(r) * grid_cols + c];
  }
};

namespace detail {

struct TileStats {
  double mean_a = 0.0, mean_b = 0.0;
  double var_a = 0.0, var_b = 0.0;
  double cov = 0.0;
  double mad = 0.0;
  long n = 0;
};

inline TileStats tile_stats(const IrisImage& a, const IrisImage& b, int r0,
                            int c0, int r1, int c1) {
  TileStats s;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0, sd = 0.0;
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      const double va = a.at(r, c);
      const double vb = b.at(r, c);
      sa += va;
      sb += vb;
      saa += va * va;
      sbb += vb * vb;
      sab += va * vb;
      sd += std::abs(va - vb);
      ++s.n;
    }
  }
  const double n = static_cast<double>(s.n);
  s.mean_a = sa / n;
  s.mean_b = sb / n;
  s.var_a = std::max(0.0, saa / n - s.mean_a * s.mean_a);
  s.var_b = std::max(0.0, sbb / n - s.mean_b * s.mean_b);
  s.cov = sab / n - s.mean_a * s.mean_b;
  s.mad = sd / n;
  return s;
}

}  // namespace detail

// Tile-by-tile comparison of two pre-registered images of the same scale.
inline ComparisonReport compare(const IrisImage& reference,
                                const IrisImage& sample,
                                const CompareParams& params = {}) {
  params.validate();
  if (reference.width != sample.width || reference.height != sample.height) {
    throw UnitError("compare: image dimensions differ");
  }
  const double rel = std::abs(reference.microns_per_pixel - sample.microns_per_pixel) /
                     reference.microns_per_pixel;
  if (rel > 0.01) {
    throw UnitError("compare: microns-per-pixel differ by more than 1%");
  }
  if (params.tile_size_px > reference.width ||
      params.tile_size_px > reference.height) {
    throw ConfigError("compare: tile size exceeds the image");
  }

  ComparisonReport report;
  report.tile_size_px = params.tile_size_px;
  report.microns_per_pixel = reference.microns_per_pixel;
  report.image_width_px = reference.width;
  report.image_height_px = reference.height;
  report.params = params;
  const int T = params.tile_size_px;
  report.grid_rows = (reference.height + T - 1) / T;
  report.grid_cols = (reference.width + T - 1) / T;

  const double variance_floor =
      params.variance_floor_frac * kFullScale16 * kFullScale16;
  const double mad_tolerance = params.mad_tolerance_frac * kFullScale16;

  int passing = 0;
  for (int tr = 0; tr < report.grid_rows; ++tr) {
    for (int tc = 0; tc < report.grid_cols; ++tc) {
      const int r0 = tr * T;
      const int c0 = tc * T;
      const int r1 = std::min(reference.height, r0 + T);
      const int c1 = std::min(reference.width, c0 + T);
      const auto s = detail::tile_stats(reference, sample, r0, c0, r1, c1);
      TileScore tile;
      tile.row = tr;
      tile.col = tc;
      tile.mean_abs_diff = s.mad;
      if (s.var_a < variance_floor || s.var_b < variance_floor) {
        tile.flat = true;
        tile.ncc = 0.0;
        tile.pass = s.mad <= mad_tolerance;
      } else {
        tile.ncc = std::clamp(s.cov / std::sqrt(s.var_a * s.var_b), -1.0, 1.0);
        tile.pass = tile.ncc >= params.ncc_threshold;
      }
      passing += tile.pass ? 1 : 0;
      report.tiles.push_back(tile);
    }
  }
  report.confidence =
      static_cast<double>(passing) / static_cast<double>(report.tiles.size());

  // Anomalies: 4-connected components of failing tiles, kept when their
  // footprint reaches the minimum area.
  const double tile_um = T * reference.microns_per_pixel;
  const double tile_area_um2 = tile_um * tile_um;
  std::vector<int> label(report.tiles.size(), -1);
  int next_label = 0;
  for (std::size_t i = 0; i < report.tiles.size(); ++i) {
    if (report.tiles[i].pass || label[i] >= 0) continue;
    // Flood fill.
    std::vector<std::size_t> stack{i};
    std::vector<std::size_t> members;
    label[i] = next_label;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      members.push_back(cur);
      const int r = report.tiles[cur].row;
      const int c = report.tiles[cur].col;
      const int nbr[4][2] = {{r - 1, c}, {r + 1, c}, {r, c - 1}, {r, c + 1}};
      for (const auto& rc : nbr) {
        if (rc[0] < 0 || rc[0] >= report.grid_rows || rc[1] < 0 ||
            rc[1] >= report.grid_cols) {
          continue;
        }
        const std::size_t j =
            static_cast<std::size_t>(rc[0]) * report.grid_cols + rc[1];
        if (!report.tiles[j].pass && label[j] < 0) {
          label[j] = next_label;
          stack.push_back(j);
        }
      }
    }
    ++next_label;

    AnomalyRegion region;
    region.tile_count = static_cast<int>(members.size());
    region.area_um2 = region.tile_count * tile_area_um2;
    if (region.area_um2 < params.min_anomaly_area_um2) continue;
    region.min_tile_row = report.grid_rows;
    region.min_tile_col = report.grid_cols;
    region.max_tile_row = -1;
    region.max_tile_col = -1;
    for (const std::size_t m : members) {
      const TileScore& t = report.tiles[m];
      region.min_tile_row = std::min(region.min_tile_row, t.row);
      region.max_tile_row = std::max(region.max_tile_row, t.row);
      region.min_tile_col = std::min(region.min_tile_col, t.col);
      region.max_tile_col = std::max(region.max_tile_col, t.col);
      region.worst_score = std::min(region.worst_score, t.score());
    }
    // Pixel bbox -> die micron frame (y up: image row 0 is the die top).
    const double mpp = reference.microns_per_pixel;
    const int px_r0 = region.min_tile_row * T;
    const int px_r1 = std::min(reference.height, (region.max_tile_row + 1) * T);
    const int px_c0 = region.min_tile_col * T;
    const int px_c1 = std::min(reference.width, (region.max_tile_col + 1) * T);
    region.bbox_x0_um = px_c0 * mpp;
    region.bbox_x1_um = px_c1 * mpp;
    region.bbox_y0_um = (reference.height - px_r1) * mpp;
    region.bbox_y1_um = (reference.height - px_r0) * mpp;
    report.anomalies.push_back(region);
  }
  return report;
}

enum class Verdict { kPass, kInspect, kFail };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kInspect: return "inspect";
    case Verdict::kFail: return "fail";
  }
  return "unknown";
}

struct ConfidenceSummary {
  Verdict verdict = Verdict::kPass;
  double confidence = 0.0;
  std::vector<std::string> reasons;
};

// pass: every tile agreed. fail: at least one anomaly reached the minimum
// area. inspect: isolated failing tiles only.
inline ConfidenceSummary confidence_summary(const ComparisonReport& report) {
  ConfidenceSummary s;
  s.confidence = report.confidence;
  if (!report.anomalies.empty()) {
    s.verdict = Verdict::kFail;
    for (const auto& a : report.anomalies) {
      std::ostringstream r;
      r << "anomaly of " << a.tile_count << " tile(s), " << a.area_um2
        << " um^2, bounding box [" << a.bbox_x0_um << ", " << a.bbox_x1_um
        << "] x [" << a.bbox_y0_um << ", " << a.bbox_y1_um
        << "] um, worst score " << a.worst_score;
      s.reasons.push_back(r.str());
    }
  } else if (report.confidence < 1.0) {
    s.verdict = Verdict::kInspect;
    std::ostringstream r;
    r << "failing tiles below the minimum anomaly area ("
      << report.params.min_anomaly_area_um2 << " um^2); confidence "
      << report.confidence;
    s.reasons.push_back(r.str());
  } else {
    s.verdict = Verdict::kPass;
    s.reasons.push_back("all tiles within tolerance");
  }
  return s;
}

inline nlohmann::json report_to_json(const ComparisonReport& report) {
  nlohmann::json grid = nlohmann::json::array();
  for (int r = 0; r < report.grid_rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < report.grid_cols; ++c) {
      const TileScore& t = report.tile(r, c);
      row.push_back({{"ncc", t.flat ? nlohmann::json() : nlohmann::json(t.ncc)},
                     {"mean_abs_diff", t.mean_abs_diff},
                     {"flat", t.flat},
                     {"pass", t.pass}});
    }
    grid.push_back(row);
  }
  nlohmann::json anomalies = nlohmann::json::array();
  for (const auto& a : report.anomalies) {
    anomalies.push_back(
        {{"tile_bbox", {a.min_tile_row, a.min_tile_col, a.max_tile_row, a.max_tile_col}},
         {"bbox_um", {a.bbox_x0_um, a.bbox_y0_um, a.bbox_x1_um, a.bbox_y1_um}},
         {"area_um2", a.area_um2},
         {"tile_count", a.tile_count},
         {"worst_score", a.worst_score}});
  }
  const ConfidenceSummary summary = confidence_summary(report);
  return {{"tile_size_px", report.tile_size_px},
          {"grid", grid},
          {"confidence", report.confidence},
          {"anomalies", anomalies},
          {"verdict", to_string(summary.verdict)},
          {"reasons", summary.reasons},
          {"params",
           {{"tile_size_px", report.params.tile_size_px},
            {"ncc_threshold", report.params.ncc_threshold},
            {"min_anomaly_area_um2", report.params.min_anomaly_area_um2},
            {"variance_floor_frac", report.params.variance_floor_frac},
            {"mad_tolerance_frac", report.params.mad_tolerance_frac},
            {"confidence_definition", "passing tiles / total scored tiles"}}},
          {"microns_per_pixel", report.microns_per_pixel},
          {"image_size_px", {report.image_width_px, report.image_height_px}}};
}

// Failing tiles rendered white on black, one pixel per tile.
inline void write_heatmap_pgm(const ComparisonReport& report,
                              const std::filesystem::path& path) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(report.grid_rows) *
                               report.grid_cols);
  for (std::size_t i = 0; i < report.tiles.size(); ++i) {
    px[i] = report.tiles[i].pass ? 0 : 255;
  }
  write_pgm8(path, report.grid_cols, report.grid_rows, px);
}

}  // namespace iris

#endif  // IRIS_VERIFY_HPP_
