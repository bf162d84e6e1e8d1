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
// Translation-only registration by exhaustive normalized cross-correlation,
// and mosaic assembly from overlapping tiles. Exposure varies capture to
// capture, so every score is intensity-affine invariant.

#ifndef IRIS_ALIGN_HPP_
#define IRIS_ALIGN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iris/errors.hpp"
#include "iris/image.hpp"

namespace iris {

struct Offset {
  int dx = 0;
  int dy = 0;
  double score = 0.0;  // normalized cross-correlation at (dx, dy), in [-1, 1]
};

// Zero-mean, unit-variance copy (population statistics over all pixels).
inline IrisImage normalize_intensity(const IrisImage& image) {
  if (image.pixels.size() < 2) {
    throw DegenerateInputError("normalize: image too small");
  }
  double mean = 0.0;
  for (double p : image.pixels) mean += p;
  mean /= static_cast<double>(image.pixels.size());
  double var = 0.0;
  for (double p : image.pixels) var += (p - mean) * (p - mean);
  var /= static_cast<double>(image.pixels.size());
  if (!(var > 0.0)) {
    throw DegenerateInputError(
        "normalize: constant image has no intensity structure");
  }
  IrisImage out = image;
  const double inv_std = 1.0 / std::sqrt(var);
  for (double& p : out.pixels) p = (p - mean) * inv_std;
  out.metadata["normalized"] = true;
  return out;
}

namespace detail {

// NCC over the overlap when `sample`'s origin sits at (dx, dy) in the
// reference frame. Returns nothing if the overlap is below `min_overlap_px`.
inline std::optional<Offset> ncc_at(const IrisImage& ref, const IrisImage& sample,
                                    int dx, int dy, long min_overlap_px) {
  const int c0 = std::max(0, dx);
  const int c1 = std::min(ref.width, dx + sample.width);
  const int r0 = std::max(0, dy);
  const int r1 = std::min(ref.height, dy + sample.height);
  const long n = static_cast<long>(std::max(0, c1 - c0)) * std::max(0, r1 - r0);
  if (n < min_overlap_px || n < 2) return std::nullopt;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      const double a = ref.at(r, c);
      const double b = sample.at(r - dy, c - dx);
      sa += a;
      sb += b;
      saa += a * a;
      sbb += b * b;
      sab += a * b;
    }
  }
  const double nd = static_cast<double>(n);
  const double va = saa - sa * sa / nd;
  const double vb = sbb - sb * sb / nd;
  Offset o;
  o.dx = dx;
  o.dy = dy;
  if (!(va > 0.0) || !(vb > 0.0)) {
    o.score = 0.0;  // flat overlap carries no registration signal
  } else {
    o.score = std::clamp((sab - sa * sb / nd) / std::sqrt(va * vb), -1.0, 1.0);
  }
  return o;
}

// Deterministic tie rule: higher score, then smaller |dx|+|dy|, then
// smaller dy, then smaller dx.
inline bool better(const Offset& a, const Offset& b) {
  if (a.score != b.score) return a.score > b.score;
  const int la = std::abs(a.dx) + std::abs(a.dy);
  const int lb = std::abs(b.dx) + std::abs(b.dy);
  if (la != lb) return la < lb;
  if (a.dy != b.dy) return a.dy < b.dy;
  return a.dx < b.dx;
}

inline Offset best_shift(const IrisImage& ref, const IrisImage& sample,
                         int center_dx, int center_dy, int radius,
                         long min_overlap_px) {
  std::optional<Offset> best;
  for (int dy = center_dy - radius; dy <= center_dy + radius; ++dy) {
    for (int dx = center_dx - radius; dx <= center_dx + radius; ++dx) {
      const auto o = ncc_at(ref, sample, dx, dy, min_overlap_px);
      if (!o) continue;
      if (!best || better(*o, *best)) best = *o;
    }
  }
  if (!best) {
    throw CoverageError("register: no searched shift had enough overlap");
  }
  return *best;
}

inline void check_same_scale(const IrisImage& a, const IrisImage& b) {
  const double rel = std::abs(a.microns_per_pixel - b.microns_per_pixel) /
                     a.microns_per_pixel;
  if (rel > 0.01) {
    throw UnitError("register: microns-per-pixel differ by " +
                    std::to_string(rel * 100.0) + "% (limit 1%)");
  }
}

}  // namespace detail

// Integer shift of `sample` relative to `reference` maximizing NCC over the
// mean/variance-normalized overlap, searched exhaustively within the radius.
inline Offset register_images(const IrisImage& reference, const IrisImage& sample,
                              int search_radius) {
  if (search_radius < 0) {
    throw DomainError("register: search radius must be >= 0");
  }
  detail::check_same_scale(reference, sample);
  // Every searched shift must keep at least a quarter of the sample inside.
  const auto span = [](int ref_n, int s_n, int d) {
    return std::max(0, std::min(ref_n, d + s_n) - std::max(0, d));
  };
  const long min_w = std::min(span(reference.width, sample.width, -search_radius),
                              span(reference.width, sample.width, search_radius));
  const long min_h = std::min(span(reference.height, sample.height, -search_radius),
                              span(reference.height, sample.height, search_radius));
  const long sample_area = static_cast<long>(sample.width) * sample.height;
  if (min_w * min_h * 4 < sample_area) {
    throw CoverageError(
        "register: overlap at the search extremes falls below 25% of the "
        "sample (radius " +
        std::to_string(search_radius) + ")");
  }
  return detail::best_shift(reference, sample, 0, 0, search_radius, 2);
}

struct TilePlacement {
  IrisImage image;
  int nominal_x = 0;
  int nominal_y = 0;
};

struct PairRefinement {
  int a_row = 0, a_col = 0;
  int b_row = 0, b_col = 0;
  int dx = 0, dy = 0;  // refined offset of b's origin relative to a's
  double score = 0.0;
};

struct TilePosition {
  int grid_row = 0, grid_col = 0;
  int x = 0, y = 0;  // resolved origin in mosaic-frame pixels
};

struct StitchResult {
  IrisImage mosaic;
  std::vector<PairRefinement> pairs;
  std::vector<TilePosition> positions;
  int origin_x = 0;  // mosaic (0,0) in the anchor tile's coordinate frame
  int origin_y = 0;
};

// Mosaic assembly: refine each adjacent-pair offset by NCC on the overlap,
// accumulate global positions row-major from the anchor tile, blend
// overlaps with linear feathering.
inline StitchResult stitch(const std::vector<TilePlacement>& tiles,
                           int overlap_px, int search_radius) {
  if (tiles.empty()) throw ConfigError("stitch: no tiles");
  if (overlap_px < 1) throw ConfigError("stitch: overlap must be >= 1 px");

  // Recover the grid structure from the nominal offsets.
  std::vector<int> xs, ys;
  for (const auto& t : tiles) {
    xs.push_back(t.nominal_x);
    ys.push_back(t.nominal_y);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  const int cols = static_cast<int>(xs.size());
  const int rows = static_cast<int>(ys.size());
  std::map<std::pair<int, int>, const TilePlacement*> grid;
  for (const auto& t : tiles) {
    const int c = static_cast<int>(std::lower_bound(xs.begin(), xs.end(), t.nominal_x) - xs.begin());
    const int r = static_cast<int>(std::lower_bound(ys.begin(), ys.end(), t.nominal_y) - ys.begin());
    grid[{r, c}] = &t;
  }
  if (grid.size() != static_cast<std::size_t>(rows) * cols ||
      grid.size() != tiles.size()) {
    throw ConfigError("stitch: tiles do not form a full connected grid");
  }
  for (const auto& t : tiles) detail::check_same_scale(tiles[0].image, t.image);

  StitchResult result;
  const auto tile_at = [&](int r, int c) { return grid.at({r, c}); };

  // Pairwise refinement. The prior is the nominal relative offset.
  std::map<std::pair<int, int>, std::pair<int, int>> right_offset, down_offset;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const TilePlacement* a = tile_at(r, c);
      for (int dir = 0; dir < 2; ++dir) {
        const int nr = r + dir;          // dir 0: right neighbor, 1: down
        const int nc = c + (1 - dir);
        if (nr >= rows || nc >= cols) continue;
        const TilePlacement* b = tile_at(nr, nc);
        const int prior_dx = b->nominal_x - a->nominal_x;
        const int prior_dy = b->nominal_y - a->nominal_y;
        const Offset o = detail::best_shift(a->image, b->image, prior_dx,
                                            prior_dy, search_radius, 64);
        if (o.score < 0.5) {
          throw StitchError("stitch: pair (" + std::to_string(r) + "," +
                            std::to_string(c) + ")-(" + std::to_string(nr) +
                            "," + std::to_string(nc) + ") scored " +
                            std::to_string(o.score) + ", below 0.5");
        }
        PairRefinement p;
        p.a_row = r;
        p.a_col = c;
        p.b_row = nr;
        p.b_col = nc;
        p.dx = o.dx;
        p.dy = o.dy;
        p.score = o.score;
        result.pairs.push_back(p);
        if (dir == 0) right_offset[{r, c}] = {o.dx, o.dy};
        else down_offset[{r, c}] = {o.dx, o.dy};
      }
    }
  }

  // Anchor at tile (0,0)'s nominal position and accumulate.
  std::vector<std::vector<std::pair<int, int>>> pos(
      rows, std::vector<std::pair<int, int>>(cols));
  pos[0][0] = {tile_at(0, 0)->nominal_x, tile_at(0, 0)->nominal_y};
  for (int r = 1; r < rows; ++r) {
    const auto d = down_offset.at({r - 1, 0});
    pos[r][0] = {pos[r - 1][0].first + d.first, pos[r - 1][0].second + d.second};
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 1; c < cols; ++c) {
      const auto d = right_offset.at({r, c - 1});
      pos[r][c] = {pos[r][c - 1].first + d.first, pos[r][c - 1].second + d.second};
    }
  }

  int min_x = pos[0][0].first, min_y = pos[0][0].second;
  int max_x = min_x, max_y = min_y;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const TilePlacement* t = tile_at(r, c);
      min_x = std::min(min_x, pos[r][c].first);
      min_y = std::min(min_y, pos[r][c].second);
      max_x = std::max(max_x, pos[r][c].first + t->image.width);
      max_y = std::max(max_y, pos[r][c].second + t->image.height);
      result.positions.push_back(
          {r, c, pos[r][c].first, pos[r][c].second});
    }
  }
  result.origin_x = min_x;
  result.origin_y = min_y;

  // Linear feathering across the overlap zone.
  const int W = max_x - min_x;
  const int H = max_y - min_y;
  std::vector<double> acc(static_cast<std::size_t>(W) * H, 0.0);
  std::vector<double> wacc(static_cast<std::size_t>(W) * H, 0.0);
  const double feather = std::max(1, overlap_px);
  const auto ramp = [feather](int i, int n) {
    return std::min({1.0, (i + 1) / feather, (n - i) / feather});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const TilePlacement* t = tile_at(r, c);
      const int ox = pos[r][c].first - min_x;
      const int oy = pos[r][c].second - min_y;
      for (int y = 0; y < t->image.height; ++y) {
        const double wy = ramp(y, t->image.height);
        for (int x = 0; x < t->image.width; ++x) {
          const double w = wy * ramp(x, t->image.width);
          const std::size_t i = static_cast<std::size_t>(oy + y) * W + (ox + x);
          acc[i] += w * t->image.at(y, x);
          wacc[i] += w;
        }
      }
    }
  }
  result.mosaic = IrisImage(W, H, tiles[0].image.microns_per_pixel);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    const double v = wacc[i] > 0.0 ? acc[i] / wacc[i] : 0.0;
    result.mosaic.pixels[i] =
        std::clamp(std::round(v), 0.0, kFullScale16);
  }
  result.mosaic.metadata = {{"stitched_tiles", static_cast<int>(tiles.size())},
                            {"quantized", true}};
  return result;
}

inline nlohmann::json stitch_report_json(const StitchResult& result) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : result.pairs) {
    pairs.push_back({{"a", {p.a_row, p.a_col}},
                     {"b", {p.b_row, p.b_col}},
                     {"refined_offset_px", {p.dx, p.dy}},
                     {"score", p.score}});
  }
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& t : result.positions) {
    positions.push_back(
        {{"tile", {t.grid_row, t.grid_col}}, {"position_px", {t.x, t.y}}});
  }
  return {{"pairs", pairs},
          {"tile_positions", positions},
          {"mosaic_size_px", {result.mosaic.width, result.mosaic.height}},
          {"mosaic_origin_px", {result.origin_x, result.origin_y}}};
}

}  // namespace iris

#endif  // IRIS_ALIGN_HPP_
