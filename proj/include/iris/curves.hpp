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

#ifndef IRIS_CURVES_HPP_
#define IRIS_CURVES_HPP_

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iris/csv.hpp"
#include "iris/errors.hpp"

namespace iris {

// Sampled wavelength -> value function. Absorption-depth data spans several
// orders of magnitude and is interpolated log-linearly in the value;
// sensor-response data stays in [0, 1] and is interpolated linearly.
enum class Interpolation { kLinear, kLogValue };

struct CurveSample {
  double wavelength_nm = 0.0;
  double value = 0.0;
};

class SpectralCurve {
 public:
  SpectralCurve(std::vector<CurveSample> samples, Interpolation interpolation,
                std::string name = "curve")
      : samples_(std::move(samples)),
        interpolation_(interpolation),
        name_(std::move(name)) {
    if (samples_.size() < 2) {
      throw ValidationError(name_ + ": a curve needs at least 2 samples");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      const auto& s = samples_[i];
      if (!std::isfinite(s.wavelength_nm) || !std::isfinite(s.value)) {
        throw ValidationError(name_ + ": non-finite sample at index " +
                              std::to_string(i));
      }
      if (i > 0 && s.wavelength_nm <= samples_[i - 1].wavelength_nm) {
        throw ValidationError(name_ +
                              ": wavelengths must be strictly increasing "
                              "(violated at index " +
                              std::to_string(i) + ")");
      }
      if (interpolation_ == Interpolation::kLogValue && s.value <= 0.0) {
        throw ValidationError(name_ +
                              ": log-interpolated curves require positive "
                              "values (index " +
                              std::to_string(i) + ")");
      }
    }
  }

  double min_wavelength_nm() const { return samples_.front().wavelength_nm; }
  double max_wavelength_nm() const { return samples_.back().wavelength_nm; }
  const std::vector<CurveSample>& samples() const { return samples_; }
  Interpolation interpolation() const { return interpolation_; }
  const std::string& name() const { return name_; }

  double peak_value() const {
    double best = samples_.front().value;
    for (const auto& s : samples_) best = std::max(best, s.value);
    return best;
  }

  double peak_wavelength_nm() const {
    const CurveSample* best = &samples_.front();
    for (const auto& s : samples_) {
      if (s.value > best->value) best = &s;
    }
    return best->wavelength_nm;
  }

  // Exact at the knots; interpolated between them.
  double evaluate(double wavelength_nm) const {
    if (wavelength_nm < min_wavelength_nm() ||
        wavelength_nm > max_wavelength_nm()) {
      std::ostringstream msg;
      msg << name_ << ": wavelength " << wavelength_nm
          << " nm outside sampled span [" << min_wavelength_nm() << ", "
          << max_wavelength_nm() << "] nm";
      throw RangeError(msg.str());
    }
    const auto it = std::lower_bound(
        samples_.begin(), samples_.end(), wavelength_nm,
        [](const CurveSample& s, double w) { return s.wavelength_nm < w; });
    if (it->wavelength_nm == wavelength_nm) return it->value;
    const CurveSample& hi = *it;
    const CurveSample& lo = *(it - 1);
    const double t =
        (wavelength_nm - lo.wavelength_nm) / (hi.wavelength_nm - lo.wavelength_nm);
    if (interpolation_ == Interpolation::kLogValue) {
      return std::exp(std::log(lo.value) +
                      t * (std::log(hi.value) - std::log(lo.value)));
    }
    return lo.value + t * (hi.value - lo.value);
  }

 private:
  std::vector<CurveSample> samples_;
  Interpolation interpolation_;
  std::string name_;
};

inline constexpr const char* kCurveCsvHeader = "wavelength_nm,value";

// Curve files: UTF-8 CSV, header `wavelength_nm,value`, rows ascending.
inline SpectralCurve load_curve_csv(const std::string& path,
                                    Interpolation interpolation,
                                    std::string name = "") {
  const CsvTable table = read_csv(path);
  if (table.header.size() != 2 || table.header[0] != "wavelength_nm" ||
      table.header[1] != "value") {
    throw ParseError(path + ":1: expected header '" +
                     std::string(kCurveCsvHeader) + "'");
  }
  std::vector<CurveSample> samples;
  samples.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CurveSample s;
    s.wavelength_nm = csv_to_double(table, i, 0);
    s.value = csv_to_double(table, i, 1);
    if (!samples.empty() && s.wavelength_nm <= samples.back().wavelength_nm) {
      throw ParseError(path + ":" + std::to_string(table.line_numbers[i]) +
                       ": wavelengths must be sorted strictly ascending");
    }
    samples.push_back(s);
  }
  return SpectralCurve(std::move(samples), interpolation,
                       name.empty() ? path : std::move(name));
}

inline void save_curve_csv(const SpectralCurve& curve,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open for writing");
  out << kCurveCsvHeader << "\n";
  for (const auto& s : curve.samples()) {
    out << s.wavelength_nm << "," << s.value << "\n";
  }
}

}  // namespace iris

#endif  // IRIS_CURVES_HPP_
