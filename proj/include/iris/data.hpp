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
// Bundled defaults. The spectral tables are digitized from published
// silicon optical-property and CMOS sensor-response data, lightly adjusted
// so that 0.3 mm of silicon passes ~10% at 1000 nm and the sensor sits at
// ~0.1x peak there. The same tables ship as CSV under data/curves/.

#ifndef IRIS_DATA_HPP_
#define IRIS_DATA_HPP_

#include <string>
#include <vector>

#include "iris/curves.hpp"
#include "iris/hardening.hpp"
#include "iris/layout.hpp"

namespace iris {

// Absorption depth of light in silicon, microns. Log-interpolated: the
// values span four orders of magnitude between 900 and 1200 nm.
inline const SpectralCurve& default_absorption_curve() {
  static const SpectralCurve curve(
      {
          {900.0, 30.0},
          {925.0, 45.0},
          {950.0, 66.0},
          {975.0, 94.0},
          {1000.0, 130.3},
          {1025.0, 215.0},
          {1050.0, 420.0},
          {1075.0, 900.0},
          {1100.0, 2600.0},
          {1125.0, 9000.0},
          {1150.0, 33000.0},
          {1175.0, 120000.0},
          {1200.0, 480000.0},
      },
      Interpolation::kLogValue, "silicon_absorption_depth");
  return curve;
}

// Silicon image-sensor response, fraction of the peak (1.0 at 530 nm).
inline const SpectralCurve& default_sensor_curve() {
  static const SpectralCurve curve(
      {
          {400.0, 0.45},
          {450.0, 0.70},
          {500.0, 0.92},
          {530.0, 1.00},
          {560.0, 0.98},
          {600.0, 0.95},
          {650.0, 0.88},
          {700.0, 0.80},
          {750.0, 0.68},
          {800.0, 0.55},
          {850.0, 0.42},
          {900.0, 0.30},
          {950.0, 0.18},
          {1000.0, 0.10},
          {1050.0, 0.045},
          {1070.0, 0.030},
          {1100.0, 0.012},
          {1150.0, 0.004},
          {1200.0, 0.0015},
      },
      Interpolation::kLinear, "sensor_sensitivity");
  return curve;
}

// Standard-cell areas per node. The 28 nm row uses the 0.8 um 9-track cell
// height; NAND2 footprint and the 6x flip-flop ratio are typical-library
// assumptions. The 55 nm and 7 nm rows are illustrative extrapolations for
// scaling demos, not vendor data.
inline const std::vector<ProcessNode>& default_node_table() {
  static const std::vector<ProcessNode> nodes = {
      {"55nm", 55.0, 1.60, 1.20, 7.20},
      {"28nm", 28.0, 0.80, 0.30, 1.80},
      {"7nm", 7.0, 0.27, 0.03, 0.18},
  };
  return nodes;
}

// A die plan with the block inventory of a mixed-signal touchscreen
// controller: data-converter channels along the top-right and right edge,
// non-volatile memory and RAM arrays across the lower half, a sea of
// standard cells from the top left to the center, and an I/O pad ring
// segment on the left. Proportions scale with the die size.
inline SynthPlan touchscreen_die_plan(double die_w_um, double die_h_um,
                                      double grid_pitch_um = 0.25) {
  SynthPlan plan;
  plan.die_w_um = die_w_um;
  plan.die_h_um = die_h_um;
  plan.grid_pitch_um = grid_pitch_um;
  plan.background_reflectance = 0.2;
  plan.provenance = "touchscreen_die_plan " + std::to_string(die_w_um) + "x" +
                    std::to_string(die_h_um) + " um";
  const double W = die_w_um;
  const double H = die_h_um;

  const auto add = [&plan](BlockKind kind, double x, double y, double w,
                           double h, TextureParams t = {}) {
    Region r;
    r.kind = kind;
    r.origin_x_um = x;
    r.origin_y_um = y;
    r.width_um = w;
    r.height_um = h;
    r.texture = t;
    plan.regions.push_back(r);
  };

  // Cell-row contrast stays low: at imaging scale the rows are sub-pixel,
  // and the shared mottle carries the tile-level texture.
  TextureParams cells;
  cells.base_reflectance = 0.45;
  cells.contrast = 0.08;

  // Bright macro body, moderate lattice contrast: the 2 um bit-cell pitch
  // aliases at imaging scale, so contrast here trades block separability
  // against pixel-level speckle.
  TextureParams ram;
  ram.base_reflectance = 0.62;
  ram.contrast = 0.18;
  ram.bit_cell_pitch_um = 2.0;

  TextureParams nvm;
  nvm.base_reflectance = 0.40;
  nvm.contrast = 0.30;
  nvm.bit_cell_pitch_um = 2.5;

  TextureParams adc;
  adc.base_reflectance = 0.50;
  adc.contrast = 0.30;
  adc.channel_pitch_um = std::max(8.0, 0.02 * W);

  TextureParams pad;
  pad.pad_diameter_um = std::max(12.0, 0.055 * H);

  // Standard-cell sea: top-left quadrant through the center.
  add(BlockKind::kStandardCell, 0.10 * W, 0.52 * H, 0.52 * W, 0.40 * H, cells);
  // Data converters: top right block and right edge column.
  add(BlockKind::kDataConverter, 0.66 * W, 0.62 * H, 0.30 * W, 0.30 * H, adc);
  add(BlockKind::kDataConverter, 0.80 * W, 0.12 * H, 0.16 * W, 0.44 * H, adc);
  // RAM arrays across the lower middle.
  add(BlockKind::kRamMacro, 0.08 * W, 0.08 * H, 0.30 * W, 0.34 * H, ram);
  add(BlockKind::kRamMacro, 0.42 * W, 0.08 * H, 0.22 * W, 0.26 * H, ram);
  // Non-volatile memory next to the RAM.
  add(BlockKind::kNonVolatileMemory, 0.42 * W, 0.38 * H, 0.22 * W, 0.10 * H, nvm);
  // Oscillator tucked between the memories and the converters.
  add(BlockKind::kOscillator, 0.68 * W, 0.08 * H, 0.09 * W, 0.09 * H);
  // I/O pads along the left edge.
  const double pad_cell = 0.12 * H;
  for (int i = 0; i < 3; ++i) {
    add(BlockKind::kIoPad, 0.0, (0.14 + 0.28 * i) * H, 0.07 * W, pad_cell, pad);
  }
  // Filler strip with the waffle power grid along the top edge.
  add(BlockKind::kFiller, 0.10 * W, 0.94 * H, 0.80 * W, 0.06 * H);
  return plan;
}

}  // namespace iris

#endif  // IRIS_DATA_HPP_
