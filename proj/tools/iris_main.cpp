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
// Command-line front end. Exit codes are a stable contract:
//   0 success (or compare verdict "pass")
//   1 validation / runtime error
//   2 usage error
//   3 compare verdict "fail"
//   4 compare verdict "inspect"

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "iris/iris.hpp"

namespace fs = std::filesystem;

namespace {

struct CurveOptions {
  std::string curves_dir;

  iris::SpectralCurve absorption() const {
    if (curves_dir.empty()) return iris::default_absorption_curve();
    return iris::load_curve_csv(
        (fs::path(curves_dir) / "silicon_absorption_depth.csv").string(),
        iris::Interpolation::kLogValue, "silicon_absorption_depth");
  }
  iris::SpectralCurve sensitivity() const {
    if (curves_dir.empty()) return iris::default_sensor_curve();
    return iris::load_curve_csv(
        (fs::path(curves_dir) / "sensor_sensitivity.csv").string(),
        iris::Interpolation::kLinear, "sensor_sensitivity");
  }
};

fs::path layout_json_path(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) return p / "layout.json";
  return p;
}

struct BudgetRow {
  double wavelength_nm;
  double thickness_um;
  int passes;
  iris::SignalBudget budget;
};

void print_budget_table(const std::vector<BudgetRow>& rows, std::ostream& out) {
  out << std::left << std::setw(14) << "wavelength_nm" << std::setw(13)
      << "thickness_um" << std::setw(8) << "passes" << std::setw(14)
      << "transmission" << std::setw(13) << "sensitivity" << std::setw(11)
      << "combined" << std::setw(18) << "reduction_factor"
      << "suggested_exposure_s" << "\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(14) << r.wavelength_nm << std::setw(13)
        << r.thickness_um << std::setw(8) << r.passes << std::setw(14)
        << std::setprecision(6) << r.budget.transmission << std::setw(13)
        << r.budget.sensitivity << std::setw(11) << r.budget.combined
        << std::setw(18) << r.budget.reduction_factor
        << r.budget.suggested_exposure_s << "\n";
  }
}

void write_budget_csv(const std::vector<BudgetRow>& rows, const fs::path& path) {
  std::ostringstream out;
  out << "wavelength_nm,thickness_um,passes,transmission,sensitivity,combined,"
         "reduction_factor,suggested_exposure_s\n";
  out << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.wavelength_nm << "," << r.thickness_um << "," << r.passes << ","
        << r.budget.transmission << "," << r.budget.sensitivity << ","
        << r.budget.combined << "," << r.budget.reduction_factor << ","
        << r.budget.suggested_exposure_s << "\n";
  }
  iris::atomic_write_file(path, out.str());
}

// "lo:hi:step" -> inclusive sweep values.
std::vector<double> parse_sweep(const std::string& text) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0.0 || hi < lo) {
    throw iris::ValidationError("sweep must be lo:hi:step, got '" + text +
                                "'");
  }
  std::vector<double> values;
  for (double v = lo; v <= hi + 1e-9; v += step) values.push_back(v);
  return values;
}

std::pair<double, double> parse_xy(const std::string& text) {
  double x = 0.0, y = 0.0;
  char c = 0;
  std::istringstream in(text);
  if (!(in >> x >> c >> y) || c != ',') {
    throw iris::ValidationError("expected X,Y, got '" + text + "'");
  }
  return {x, y};
}

int g_exit_code = 0;

void setup_budget(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "budget", "Through-silicon signal budget and exposure compensation");
  auto wavelength = std::make_shared<double>(1070.0);
  auto thickness = std::make_shared<double>(300.0);
  auto passes = std::make_shared<int>(1);
  auto base_exposure = std::make_shared<double>(0.033);
  auto sweep = std::make_shared<std::string>();
  auto csv = std::make_shared<std::string>();
  auto curves = std::make_shared<CurveOptions>();
  cmd->add_option("--wavelength-nm", *wavelength, "Illumination wavelength [nm]");
  cmd->add_option("--thickness-um", *thickness, "Bulk silicon thickness [um]");
  cmd->add_option("--passes", *passes, "Traversals of the bulk (1 or 2)");
  cmd->add_option("--base-exposure-s", *base_exposure,
                  "Visible-light reference exposure [s]");
  cmd->add_option("--sweep-thickness", *sweep,
                  "Sweep thickness lo:hi:step [um], one row per value");
  cmd->add_option("--csv", *csv, "Also write rows to this CSV file");
  cmd->add_option("--curves-dir", curves->curves_dir,
                  "Directory with curve CSVs (default: bundled curves)");
  cmd->callback([=]() {
    const auto absorption = curves->absorption();
    const auto sensitivity = curves->sensitivity();
    std::vector<double> thicknesses =
        sweep->empty() ? std::vector<double>{*thickness} : parse_sweep(*sweep);
    std::vector<BudgetRow> rows;
    for (const double t : thicknesses) {
      iris::OpticalConfig config;
      config.wavelength_nm = *wavelength;
      config.silicon_thickness_um = t;
      config.passes = *passes;
      rows.push_back({*wavelength, t, *passes,
                      iris::signal_budget(config, absorption, sensitivity,
                                          *base_exposure)});
    }
    print_budget_table(rows, std::cout);
    if (!csv->empty()) {
      write_budget_csv(rows, *csv);
      iris::RunManifest manifest;
      manifest.subcommand = "budget";
      manifest.parameters = {{"wavelength_nm", *wavelength},
                             {"thickness_um", *thickness},
                             {"passes", *passes},
                             {"base_exposure_s", *base_exposure},
                             {"sweep_thickness", *sweep},
                             {"curves_dir", curves->curves_dir}};
      manifest.outputs = {*csv};
      fs::path mpath(*csv);
      mpath.replace_extension(".manifest.json");
      manifest.write(mpath);
    }
  });
}

void setup_synth(CLI::App& app) {
  auto* cmd = app.add_subcommand("synth", "Synthesize a die layout from a plan");
  auto plan_path = std::make_shared<std::string>();
  auto demo_die = std::make_shared<double>(0.0);
  auto seed = std::make_shared<std::uint64_t>(0);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--plan", *plan_path, "Plan JSON file");
  cmd->add_option("--demo-die-um", *demo_die,
                  "Skip --plan: bundled mixed-signal plan on a square die of "
                  "this width [um]");
  cmd->add_option("--seed", *seed, "Texture seed");
  cmd->add_option("--out", *out, "Output directory")->required();
  cmd->callback([=]() {
    iris::SynthPlan plan;
    if (!plan_path->empty()) {
      plan = iris::load_plan(*plan_path);
    } else if (*demo_die > 0.0) {
      plan = iris::touchscreen_die_plan(*demo_die, *demo_die);
    } else {
      throw iris::ValidationError("synth: give --plan or --demo-die-um");
    }
    const iris::DieLayout layout = iris::synthesize_layout(plan, *seed);
    fs::create_directories(*out);
    iris::save_layout(layout, fs::path(*out) / "layout.json");
    iris::RunManifest manifest;
    manifest.subcommand = "synth";
    manifest.seed = *seed;
    manifest.parameters = {{"plan", *plan_path},
                           {"demo_die_um", *demo_die},
                           {"resolved_plan", iris::to_json(plan)}};
    if (!plan_path->empty()) manifest.inputs.push_back(*plan_path);
    manifest.outputs = {(fs::path(*out) / "layout.json").string(),
                        (fs::path(*out) / "layout.pgm").string()};
    manifest.write(fs::path(*out) / "manifest.json");
    std::cout << "layout " << layout.nx << "x" << layout.ny << " samples, "
              << layout.regions.size() << " regions -> " << *out << "\n";
  });
}

struct RenderFlags {
  std::string layout;
  std::string config_path;
  std::string out;
  double wavelength_nm = 1070.0;
  double thickness_um = 300.0;
  int passes = 1;
  double na = 0.58;
  double um_per_px = 1.67;
  long width_px = 0;
  double elevation_deg = 0.0;
  double azimuth_deg = 0.0;
  double exposure_s = 1.0;
  double gain = 0.0;  // 0 -> auto-expose to put p99 at 80% full scale
  bool noise = false;
  double read_noise_sigma = 0.01;
  bool shot_noise = false;
  std::uint64_t seed = 0;
  int tile_px = 0;
  int overlap_px = 32;
  int jitter_px = 0;
};

void setup_render(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "render", "Render a backside image (or tile captures) of a layout");
  auto f = std::make_shared<RenderFlags>();
  auto curves = std::make_shared<CurveOptions>();
  cmd->add_option("--layout", f->layout, "Layout directory or layout JSON")
      ->required();
  cmd->add_option("--config", f->config_path,
                  "Optical config JSON (flags below override it)");
  cmd->add_option("--out", f->out, "Output image (.pgm) or tiles directory")
      ->required();
  cmd->add_option("--wavelength-nm", f->wavelength_nm, "Wavelength [nm]");
  cmd->add_option("--thickness-um", f->thickness_um, "Bulk thickness [um]");
  cmd->add_option("--passes", f->passes, "Bulk traversals (1 or 2)");
  cmd->add_option("--na", f->na, "Numerical aperture");
  cmd->add_option("--um-per-px", f->um_per_px, "Pixel pitch [um/px]");
  cmd->add_option("--width-px", f->width_px,
                  "Pixels across the die; sets um/px = die width / pixels");
  cmd->add_option("--elevation-deg", f->elevation_deg,
                  "Illumination elevation from vertical [deg]");
  cmd->add_option("--azimuth-deg", f->azimuth_deg,
                  "Illumination azimuth, 0 = +x, counterclockwise [deg]");
  cmd->add_option("--exposure-s", f->exposure_s, "Exposure [s]");
  cmd->add_option("--gain", f->gain,
                  "Sensor gain (omit to auto-expose p99 to 80% full scale)");
  cmd->add_flag("--noise", f->noise, "Enable the sensor noise model");
  cmd->add_option("--read-noise-sigma", f->read_noise_sigma,
                  "Read noise sigma, fraction of full scale");
  cmd->add_flag("--shot-noise", f->shot_noise,
                "Add signal-proportional variance");
  cmd->add_option("--seed", f->seed, "Noise / jitter seed");
  cmd->add_option("--tile-px", f->tile_px,
                  "Capture overlapping square tiles of this size instead of "
                  "one frame [px]");
  cmd->add_option("--overlap-px", f->overlap_px, "Tile overlap [px]");
  cmd->add_option("--jitter-px", f->jitter_px,
                  "Max stage jitter applied to each tile offset [px]");
  cmd->add_option("--curves-dir", curves->curves_dir,
                  "Directory with curve CSVs (default: bundled curves)");
  cmd->callback([=]() {
    const iris::DieLayout layout =
        iris::load_layout(layout_json_path(f->layout));
    iris::OpticalConfig config;
    if (!f->config_path.empty()) {
      config = iris::config_from_json(
          nlohmann::json::parse(iris::read_file_bytes(f->config_path)));
    }
    const bool have_file = !f->config_path.empty();
    const auto given = [cmd](const std::string& name) {
      return cmd->count(name) > 0;
    };
    // Without a config file the flags (and their defaults) define the run;
    // with one, only explicitly given flags override it.
    const auto pick = [&](const std::string& flag, auto& dst, const auto& src) {
      if (!have_file || given(flag)) dst = src;
    };
    pick("--wavelength-nm", config.wavelength_nm, f->wavelength_nm);
    pick("--thickness-um", config.silicon_thickness_um, f->thickness_um);
    pick("--passes", config.passes, f->passes);
    pick("--na", config.numerical_aperture, f->na);
    pick("--um-per-px", config.microns_per_pixel, f->um_per_px);
    pick("--elevation-deg", config.illumination_elevation_deg, f->elevation_deg);
    pick("--azimuth-deg", config.illumination_azimuth_deg, f->azimuth_deg);
    pick("--exposure-s", config.exposure_s, f->exposure_s);
    pick("--seed", config.seed, f->seed);
    pick("--noise", config.noise.enabled, f->noise);
    pick("--read-noise-sigma", config.noise.read_noise_sigma, f->read_noise_sigma);
    pick("--shot-noise", config.noise.shot_noise, f->shot_noise);
    if (f->width_px > 0) {
      config.microns_per_pixel =
          iris::microns_per_pixel(layout.die_w_um, f->width_px);
    }
    // Gain precedence: explicit flag, then config file, else auto-expose.
    const bool auto_gain = !given("--gain") && !have_file;
    if (given("--gain")) {
      config.gain = f->gain;
    } else if (!have_file) {
      config.gain = 1.0;
    }

    const auto absorption = curves->absorption();
    const auto sensitivity = curves->sensitivity();

    iris::RunManifest manifest;
    manifest.seed = config.seed;
    manifest.inputs = {layout_json_path(f->layout).string()};

    if (f->tile_px > 0) {
      // Tile-capture mode: auto gain is resolved on the full frame first so
      // every tile shares the same exposure.
      double resolved_gain = config.gain;
      if (auto_gain) {
        iris::IrisImage probe =
            iris::render_base(layout, config, absorption, sensitivity);
        resolved_gain = config.gain * iris::auto_expose(probe);
        config.gain = resolved_gain;
      }
      const auto tiles = iris::capture_tiles(
          layout, config, absorption, sensitivity, f->tile_px, f->overlap_px,
          f->jitter_px, config.seed);
      fs::create_directories(f->out);
      nlohmann::json tiles_json = nlohmann::json::array();
      for (const auto& t : tiles) {
        std::ostringstream name;
        name << "tile_r" << t.grid_row << "_c" << t.grid_col << ".pgm";
        iris::save_image(t.image, fs::path(f->out) / name.str());
        tiles_json.push_back({{"file", name.str()},
                              {"grid", {t.grid_row, t.grid_col}},
                              {"nominal_px", {t.nominal_x, t.nominal_y}},
                              {"true_px", {t.true_x, t.true_y}}});
        manifest.outputs.push_back((fs::path(f->out) / name.str()).string());
      }
      iris::atomic_write_file(
          fs::path(f->out) / "tiles.json",
          nlohmann::json{{"tile_px", f->tile_px},
                         {"overlap_px", f->overlap_px},
                         {"jitter_px", f->jitter_px},
                         {"microns_per_pixel", config.microns_per_pixel},
                         {"tiles", tiles_json}}
                  .dump(2) +
              "\n");
      manifest.outputs.push_back((fs::path(f->out) / "tiles.json").string());
      manifest.subcommand = "render-tiles";
      manifest.parameters = {{"config", iris::to_json(config)},
                             {"auto_gain", auto_gain},
                             {"tile_px", f->tile_px},
                             {"overlap_px", f->overlap_px},
                             {"jitter_px", f->jitter_px}};
      if (auto_gain) {
        manifest.parameters["config"]["gain"] = "auto";
        manifest.parameters["resolved_gain"] = resolved_gain;
      }
      manifest.write(fs::path(f->out) / "manifest.json");
      std::cout << tiles.size() << " tiles of " << f->tile_px << " px -> "
                << f->out << "\n";
      return;
    }

    iris::IrisImage image =
        iris::render_base(layout, config, absorption, sensitivity);
    double resolved_gain = config.gain;
    if (auto_gain) {
      resolved_gain = config.gain * iris::auto_expose(image);
    }
    iris::apply_noise(image, config.noise,
                      iris::derive_seed(config.seed, "render-noise"));
    iris::quantize_image(image);
    image.metadata["config"] = iris::to_json(config);
    image.metadata["config"]["gain"] = resolved_gain;
    image.metadata["seed"] = config.seed;
    iris::save_image(image, f->out);
    manifest.subcommand = "render";
    manifest.parameters = {{"config", iris::to_json(config)},
                           {"auto_gain", auto_gain}};
    if (auto_gain) {
      manifest.parameters["config"]["gain"] = "auto";
      manifest.parameters["resolved_gain"] = resolved_gain;
    }
    manifest.outputs = {f->out,
                        iris::image_sidecar_path(f->out).string()};
    fs::path mpath(f->out);
    mpath.replace_extension(".manifest.json");
    manifest.write(mpath);
    std::cout << "image " << image.width << "x" << image.height << " px at "
              << image.microns_per_pixel << " um/px -> " << f->out << "\n";
  });
}

void setup_inject(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "inject", "Copy a layout with a square reflectance modification");
  auto layout_arg = std::make_shared<std::string>();
  auto center = std::make_shared<std::string>();
  auto area = std::make_shared<double>(9.0);
  auto delta = std::make_shared<double>(-0.3);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--layout", *layout_arg, "Input layout directory or JSON")
      ->required();
  cmd->add_option("--center-um", *center, "Patch center X,Y [um]")->required();
  cmd->add_option("--area-um2", *area, "Patch area [um^2]");
  cmd->add_option("--delta", *delta, "Reflectance delta, clamped to [0,1]");
  cmd->add_option("--out", *out, "Output directory")->required();
  cmd->callback([=]() {
    const iris::DieLayout layout =
        iris::load_layout(layout_json_path(*layout_arg));
    const auto [cx, cy] = parse_xy(*center);
    const iris::DieLayout modified =
        iris::inject_trojan(layout, cx, cy, *area, *delta);
    fs::create_directories(*out);
    iris::save_layout(modified, fs::path(*out) / "layout.json");
    iris::RunManifest manifest;
    manifest.subcommand = "inject";
    manifest.parameters = {{"center_um", {cx, cy}},
                           {"area_um2", *area},
                           {"delta", *delta}};
    manifest.inputs = {layout_json_path(*layout_arg).string()};
    manifest.outputs = {(fs::path(*out) / "layout.json").string(),
                        (fs::path(*out) / "layout.pgm").string()};
    manifest.write(fs::path(*out) / "manifest.json");
    std::cout << "modified layout -> " << *out << "\n";
  });
}

void setup_register(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "register", "Find the sample's integer-pixel offset in the reference");
  auto ref = std::make_shared<std::string>();
  auto sample = std::make_shared<std::string>();
  auto radius = std::make_shared<int>(8);
  cmd->add_option("--ref", *ref, "Reference image (.pgm)")->required();
  cmd->add_option("--sample", *sample, "Sample image (.pgm)")->required();
  cmd->add_option("--radius-px,--radius", *radius, "Search radius [px]");
  cmd->callback([=]() {
    const iris::IrisImage a = iris::load_image(*ref);
    const iris::IrisImage b = iris::load_image(*sample);
    const iris::Offset o = iris::register_images(a, b, *radius);
    std::cout << "dx=" << o.dx << " dy=" << o.dy << " score=" << std::fixed
              << std::setprecision(3) << o.score << "\n";
  });
}

void setup_stitch(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "stitch", "Assemble captured tiles into a die-scale mosaic");
  auto tiles_dir = std::make_shared<std::string>();
  auto overlap = std::make_shared<int>(32);
  auto radius = std::make_shared<int>(8);
  auto out = std::make_shared<std::string>();
  auto report = std::make_shared<std::string>();
  cmd->add_option("--tiles", *tiles_dir, "Tiles directory (with tiles.json)")
      ->required();
  cmd->add_option("--overlap-px,--overlap", *overlap, "Nominal tile overlap [px]");
  cmd->add_option("--radius-px,--radius", *radius, "Pairwise search radius [px]");
  cmd->add_option("--out", *out, "Output mosaic (.pgm)")->required();
  cmd->add_option("--report", *report, "Stitch report JSON path");
  cmd->callback([=]() {
    const fs::path dir(*tiles_dir);
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(iris::read_file_bytes(dir / "tiles.json"));
    } catch (const nlohmann::json::parse_error& e) {
      throw iris::ParseError((dir / "tiles.json").string() + ": " + e.what());
    }
    std::vector<iris::TilePlacement> tiles;
    for (const auto& t : meta.at("tiles")) {
      iris::TilePlacement p;
      p.image = iris::load_image(dir / t.at("file").get<std::string>());
      p.nominal_x = t.at("nominal_px").at(0).get<int>();
      p.nominal_y = t.at("nominal_px").at(1).get<int>();
      tiles.push_back(std::move(p));
    }
    const iris::StitchResult result = iris::stitch(tiles, *overlap, *radius);
    iris::save_image(result.mosaic, *out);
    if (!report->empty()) {
      iris::atomic_write_file(*report,
                              iris::stitch_report_json(result).dump(2) + "\n");
    }
    iris::RunManifest manifest;
    manifest.subcommand = "stitch";
    manifest.parameters = {{"overlap_px", *overlap}, {"radius_px", *radius}};
    manifest.inputs = {(dir / "tiles.json").string()};
    manifest.outputs = {*out};
    if (!report->empty()) manifest.outputs.push_back(*report);
    fs::path mpath(*out);
    mpath.replace_extension(".manifest.json");
    manifest.write(mpath);
    std::cout << "mosaic " << result.mosaic.width << "x" << result.mosaic.height
              << " px from " << tiles.size() << " tiles -> " << *out << "\n";
  });
}

void setup_compare(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "compare", "Score a sample image against a reference, tile by tile");
  auto ref = std::make_shared<std::string>();
  auto sample = std::make_shared<std::string>();
  auto params = std::make_shared<iris::CompareParams>();
  auto report_path = std::make_shared<std::string>();
  auto heatmap = std::make_shared<std::string>();
  cmd->add_option("--ref", *ref, "Reference image (.pgm)")->required();
  cmd->add_option("--sample", *sample, "Sample image (.pgm)")->required();
  cmd->add_option("--tile-px,--tile", params->tile_size_px, "Tile size [px]");
  cmd->add_option("--threshold", params->ncc_threshold,
                  "Per-tile NCC pass threshold");
  cmd->add_option("--min-area-um2", params->min_anomaly_area_um2,
                  "Smallest failing-tile cluster reported as an anomaly");
  cmd->add_option("--mad-tolerance", params->mad_tolerance_frac,
                  "Flat-tile mean-abs-diff tolerance, fraction of full scale");
  cmd->add_option("--report", *report_path, "Comparison report JSON path");
  cmd->add_option("--heatmap", *heatmap, "Failing-tile heatmap (8-bit PGM)");
  cmd->callback([=]() {
    const iris::IrisImage a = iris::load_image(*ref);
    const iris::IrisImage b = iris::load_image(*sample);
    const iris::ComparisonReport report = iris::compare(a, b, *params);
    const iris::ConfidenceSummary summary = iris::confidence_summary(report);
    if (!report_path->empty()) {
      iris::atomic_write_file(*report_path,
                              iris::report_to_json(report).dump(2) + "\n");
      iris::RunManifest manifest;
      manifest.subcommand = "compare";
      manifest.parameters = {
          {"tile_px", params->tile_size_px},
          {"threshold", params->ncc_threshold},
          {"min_area_um2", params->min_anomaly_area_um2},
          {"mad_tolerance", params->mad_tolerance_frac}};
      manifest.inputs = {*ref, *sample};
      manifest.outputs = {*report_path};
      if (!heatmap->empty()) manifest.outputs.push_back(*heatmap);
      fs::path mpath(*report_path);
      mpath.replace_extension(".manifest.json");
      manifest.write(mpath);
    }
    if (!heatmap->empty()) iris::write_heatmap_pgm(report, *heatmap);
    std::cout << "verdict=" << iris::to_string(summary.verdict)
              << " confidence=" << std::fixed << std::setprecision(4)
              << report.confidence << " anomalies=" << report.anomalies.size()
              << "\n";
    for (const auto& r : summary.reasons) std::cout << "  " << r << "\n";
    switch (summary.verdict) {
      case iris::Verdict::kPass: g_exit_code = 0; break;
      case iris::Verdict::kFail: g_exit_code = 3; break;
      case iris::Verdict::kInspect: g_exit_code = 4; break;
    }
  });
}

void setup_bits(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "bits", "Checksum state sizing against the imaging detection floor");
  auto node_name = std::make_shared<std::string>("28nm");
  auto um_per_px = std::make_shared<double>(1.67);
  auto gates = std::make_shared<int>(iris::kDefaultGatesPerBit);
  auto pixels = std::make_shared<int>(iris::kDefaultPixelsRequired);
  auto table_path = std::make_shared<std::string>();
  auto json_out = std::make_shared<std::string>();
  cmd->add_option("--node", *node_name, "Process node name (e.g. 28nm)");
  cmd->add_option("--um-per-px", *um_per_px, "Imaging pitch [um/px]");
  cmd->add_option("--gates-per-bit", *gates, "Extra gates per checksum bit");
  cmd->add_option("--pixels", *pixels,
                  "Pixels a modification must span to count as detectable");
  cmd->add_option("--node-table", *table_path,
                  "Node table CSV (default: bundled table)");
  cmd->add_option("--json", *json_out, "Also write the budget as JSON");
  cmd->callback([=]() {
    const std::vector<iris::ProcessNode> nodes =
        table_path->empty() ? iris::default_node_table()
                            : iris::load_node_table_csv(*table_path);
    const iris::ProcessNode& node = iris::find_node(nodes, *node_name);
    iris::OpticalConfig config;
    config.microns_per_pixel = *um_per_px;
    const iris::HardeningBudget budget =
        iris::required_state_bits(node, config, *gates, *pixels);
    std::cout << iris::format_budget_table(budget);
    if (!json_out->empty()) {
      iris::atomic_write_file(*json_out,
                              iris::to_json(budget).dump(2) + "\n");
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backside infrared die imaging: simulator, registration, "
               "verification, and hardening arithmetic"};
  app.require_subcommand(1);
  setup_budget(app);
  setup_synth(app);
  setup_render(app);
  setup_inject(app);
  setup_register(app);
  setup_stitch(app);
  setup_compare(app);
  setup_bits(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const iris::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return g_exit_code;
}
