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
// Self-test state sizing: how many checksum bits force any test-bypass
// circuit to occupy enough die area that backside imaging will see it.

#ifndef IRIS_HARDENING_HPP_
#define IRIS_HARDENING_HPP_

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "iris/csv.hpp"
#include "iris/errors.hpp"
#include "iris/optics.hpp"

namespace iris {

struct ProcessNode {
  std::string name;
  double feature_nm = 0.0;
  double cell_height_um = 0.0;  // 9-track standard cell height
  double nand2_area_um2 = 0.0;
  double flipflop_area_um2 = 0.0;

  void validate() const {
    if (!(nand2_area_um2 > 0.0) || !(flipflop_area_um2 > 0.0)) {
      throw DomainError("node '" + name + "': cell areas must be > 0");
    }
    if (!(flipflop_area_um2 > nand2_area_um2)) {
      throw DomainError("node '" + name +
                        "': flip-flop area must exceed NAND2 area");
    }
  }
};

struct HardeningBudget {
  ProcessNode node;
  double min_detectable_area_um2 = 0.0;
  int gates_per_bit = 0;
  int pixels_required = 0;
  double microns_per_pixel = 0.0;
  long required_bits = 0;
  double bypass_area_at_required_um2 = 0.0;
};

inline constexpr int kDefaultGatesPerBit = 4;
inline constexpr int kDefaultPixelsRequired = 4;  // a 2x2-pixel disturbance

// Die area of a test-bypass circuit holding `bits` of spoofed state: one
// flip-flop plus a handful of gates per bit.
inline double bypass_area_um2(long bits, const ProcessNode& node,
                              int gates_per_bit) {
  if (bits < 0) throw DomainError("bypass_area: bits must be >= 0");
  if (gates_per_bit < 0) {
    throw DomainError("bypass_area: gates per bit must be >= 0");
  }
  node.validate();
  return static_cast<double>(bits) *
         (node.flipflop_area_um2 + gates_per_bit * node.nand2_area_um2);
}

// Smallest modification the imaging chain can be trusted to flag: a
// disturbance spanning `pixels_required` pixels.
inline double min_detectable_area_um2(double microns_per_pixel,
                                      int pixels_required) {
  if (pixels_required < 1) {
    throw DomainError("min_detectable_area: pixels required must be >= 1");
  }
  if (!(microns_per_pixel > 0.0)) {
    throw DomainError("min_detectable_area: microns per pixel must be > 0");
  }
  return pixels_required * microns_per_pixel * microns_per_pixel;
}

inline double min_detectable_area_um2(const OpticalConfig& config,
                                      int pixels_required) {
  return min_detectable_area_um2(config.microns_per_pixel, pixels_required);
}

// Smallest checksum width whose bypass is at least as large as the minimum
// detectable modification.
inline HardeningBudget required_state_bits(const ProcessNode& node,
                                           const OpticalConfig& config,
                                           int gates_per_bit = kDefaultGatesPerBit,
                                           int pixels_required = kDefaultPixelsRequired) {
  node.validate();
  HardeningBudget b;
  b.node = node;
  b.gates_per_bit = gates_per_bit;
  b.pixels_required = pixels_required;
  b.microns_per_pixel = config.microns_per_pixel;
  b.min_detectable_area_um2 =
      min_detectable_area_um2(config.microns_per_pixel, pixels_required);
  const double per_bit = bypass_area_um2(1, node, gates_per_bit);
  if (!(per_bit > 0.0)) {
    throw DomainError("required_state_bits: per-bit area is zero, no finite "
                      "bit count can reach the detectable area");
  }
  b.required_bits = std::max(
      1L, static_cast<long>(std::ceil(b.min_detectable_area_um2 / per_bit - 1e-12)));
  b.bypass_area_at_required_um2 =
      bypass_area_um2(b.required_bits, node, gates_per_bit);
  return b;
}

inline constexpr const char* kNodeCsvHeader =
    "name,feature_nm,cell_height_um,nand2_area_um2,flipflop_area_um2";

inline std::vector<ProcessNode> load_node_table_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expected = {"name", "feature_nm",
                                             "cell_height_um", "nand2_area_um2",
                                             "flipflop_area_um2"};
  if (table.header != expected) {
    throw ParseError(path + ":1: expected header '" +
                     std::string(kNodeCsvHeader) + "'");
  }
  std::vector<ProcessNode> nodes;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ProcessNode n;
    n.name = table.rows[i][0];
    n.feature_nm = csv_to_double(table, i, 1);
    n.cell_height_um = csv_to_double(table, i, 2);
    n.nand2_area_um2 = csv_to_double(table, i, 3);
    n.flipflop_area_um2 = csv_to_double(table, i, 4);
    n.validate();
    nodes.push_back(std::move(n));
  }
  return nodes;
}

inline const ProcessNode& find_node(const std::vector<ProcessNode>& nodes,
                                    const std::string& name) {
  for (const auto& n : nodes) {
    if (n.name == name) return n;
  }
  std::ostringstream msg;
  msg << "unknown process node '" << name << "'; available:";
  for (const auto& n : nodes) msg << " " << n.name;
  throw ValidationError(msg.str());
}

inline nlohmann::json to_json(const HardeningBudget& b) {
  return {{"node",
           {{"name", b.node.name},
            {"feature_nm", b.node.feature_nm},
            {"cell_height_um", b.node.cell_height_um},
            {"nand2_area_um2", b.node.nand2_area_um2},
            {"flipflop_area_um2", b.node.flipflop_area_um2}}},
          {"microns_per_pixel", b.microns_per_pixel},
          {"pixels_required", b.pixels_required},
          {"gates_per_bit", b.gates_per_bit},
          {"min_detectable_area_um2", b.min_detectable_area_um2},
          {"required_bits", b.required_bits},
          {"bypass_area_at_required_um2", b.bypass_area_at_required_um2}};
}

inline std::string format_budget_table(const HardeningBudget& b) {
  std::ostringstream out;
  out << std::left;
  const auto row = [&out](const std::string& k, const std::string& v) {
    out << "  " << std::setw(28) << k << v << "\n";
  };
  std::ostringstream n1, n2, n3, n4, n5, n6;
  n1 << b.node.name << " (" << b.node.feature_nm << " nm)";
  n2 << b.node.flipflop_area_um2 << " um^2 flip-flop, " << b.node.nand2_area_um2
     << " um^2 NAND2";
  n3 << b.microns_per_pixel << " um/px, " << b.pixels_required << " px";
  n4 << b.min_detectable_area_um2 << " um^2";
  n5 << b.required_bits << " (with " << b.gates_per_bit << " gates per bit)";
  n6 << b.bypass_area_at_required_um2 << " um^2";
  row("process node", n1.str());
  row("cell areas", n2.str());
  row("detection criterion", n3.str());
  row("min detectable area", n4.str());
  row("required checksum bits", n5.str());
  row("bypass area at that width", n6.str());
  return out.str();
}

}  // namespace iris

#endif  // IRIS_HARDENING_HPP_
