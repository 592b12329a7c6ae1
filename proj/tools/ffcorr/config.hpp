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
#include <string>
#include <vector>

#include <json.hpp>

#include "ffcorr/circuits.hpp"
#include "ffcorr/montecarlo.hpp"
#include "ffcorr/process.hpp"
#include "ffcorr/pulse.hpp"
#include "ffcorr/spectra.hpp"

namespace ffcorr::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct Violation {
  /// JSON pointer to the offending field, e.g. "/sequence/items/2/duration".
  std::string path;
  std::string message;
};

struct ChannelConfig {
  std::string id;
  std::optional<SpectralDensity> spectrum;
};

struct GridConfig {
  /// One of default, linear, logarithmic, log_linear, values.
  std::string type = "default";
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
  double points_per_decade = 0.0;
  double max_step = 0.0;
  std::vector<double> values;

  FrequencyGrid build(double tau) const;
};

struct TaskConfig {
  std::string name;
  /// Empty means all channels.
  std::vector<std::string> channels;
};

struct MonteCarloConfig {
  double dt = 0.0;
  std::size_t trajectories = 1000;
  int window_factor = 8;
  int substeps = 1000;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  std::optional<PulseSequence> sequence;
  std::vector<ChannelConfig> channels;
  GridConfig grid;
  std::vector<TaskConfig> tasks;
  QuadratureOptions quadrature;
  MonteCarloConfig montecarlo;
  std::uint64_t seed = 0;
  std::string output_dir = "ffcorr-output";
  /// Band limit used when estimating xi for white spectra; 0 uses the grid
  /// maximum.
  double white_band_limit = 0.0;
};

const std::vector<std::string>& task_names();

struct ParseResult {
  std::optional<RunConfig> config;
  std::vector<Violation> violations;
};

/// Validates \p doc and builds the run configuration. Relative file paths
/// (tabulated spectra) resolve against \p base_dir. All violations are
/// collected; config is set only when there are none.
ParseResult parse_config(const Json& doc, const std::filesystem::path& base_dir);

/// Reads and parses a config file. Unreadable files and JSON syntax errors
/// are reported as a violation at path "".
ParseResult load_config(const std::filesystem::path& path);

/// Hermitian or unitary operator in the config's dense form
/// {"re": [[...]], "im": [[...]]}.
Json matrix_to_json(const Matrix& m);

/// Inline sequence description reproducing \p seq bit for bit.
Json sequence_to_json(const PulseSequence& seq);

/// Circuit description reproducing build_sequence(spec, noise).
Json circuit_to_json(const CircuitSpec& spec, const std::vector<NoiseSpec>& noise);

/// Complete run config around a sequence description with a White
/// placeholder spectrum per channel and a fidelity_ff task.
Json emit_config(const Json& sequence, const std::vector<std::string>& channels);

}  // namespace ffcorr::cli
