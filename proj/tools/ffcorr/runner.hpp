// Copyright 2026 The ffcorr Authors
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
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace ffcorr::cli {

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  /// Path and raw bytes of the config, recorded in the manifest.
  std::filesystem::path config_path;
  std::string config_text;
};

struct RunReport {
  std::filesystem::path output_dir;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Runs every task of \p cfg and writes one CSV per task plus
/// manifest.json. Non-fatal diagnostics go to \p log and the manifest.
RunReport run(const RunConfig& cfg, const RunOptions& options, std::ostream& log);

/// Lower-case hex SHA-256 of \p data.
std::string sha256_hex(const std::string& data);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

}  // namespace ffcorr::cli
