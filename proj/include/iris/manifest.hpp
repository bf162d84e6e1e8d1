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

#ifndef IRIS_MANIFEST_HPP_
#define IRIS_MANIFEST_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "iris/fsio.hpp"

namespace iris {

inline constexpr const char* kToolVersion = "iris 0.1.0";

// One manifest per CLI run: the resolved parameters that reproduce the
// run's outputs byte-for-byte. Only the timestamp varies between re-runs.
struct RunManifest {
  std::string subcommand;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    const auto now = std::chrono::system_clock::now();
    const auto secs =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
            .count();
    return {{"subcommand", subcommand},
            {"parameters", parameters},
            {"inputs", inputs},
            {"outputs", outputs},
            {"seed", seed},
            {"tool_version", kToolVersion},
            {"timestamp_unix_s", secs}};
  }

  void write(const std::filesystem::path& path) const {
    atomic_write_file(path, to_json().dump(2) + "\n");
  }
};

}  // namespace iris

#endif  // IRIS_MANIFEST_HPP_
