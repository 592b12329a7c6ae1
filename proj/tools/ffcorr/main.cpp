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
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "ffcorr/basis.hpp"
#include "ffcorr/errors.hpp"
#include "runner.hpp"

namespace {

using namespace ffcorr;
using namespace ffcorr::cli;

constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

Json violations_json(const std::vector<Violation>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(Json{{"path", v.path}, {"message", v.message}});
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cmd_validate(const std::string& path) {
  const auto result = load_config(path);
  const bool ok = result.violations.empty();
  std::cout << Json{{"config", path}, {"valid", ok}, {"violations", violations_json(result.violations)}}
                   .dump(2)
            << '\n';
  return ok ? EXIT_SUCCESS : kExitInvalid;
}

int cmd_run(const std::string& path, const RunOptions& base) {
  const auto result = load_config(path);
  if (!result.violations.empty()) {
    std::cerr << Json{{"status", "invalid"},
                      {"config", path},
                      {"violations", violations_json(result.violations)}}
                     .dump(2)
              << '\n';
    return kExitInvalid;
  }
  RunOptions options = base;
  options.config_path = path;
  options.config_text = read_file(path);
  try {
    const auto report = run(*result.config, options, std::cerr);
    Json files = Json::array();
    for (const auto& f : report.files) files.push_back(f.string());
    std::cout << Json{{"status", "ok"},
                      {"output_dir", report.output_dir.string()},
                      {"files", files},
                      {"warnings", report.warnings}}
                     .dump(2)
              << '\n';
    return EXIT_SUCCESS;
  } catch (const std::exception& e) {
    std::string type = "Error";
    if (dynamic_cast<const ValidationError*>(&e)) type = "ValidationError";
    if (dynamic_cast<const CapacityError*>(&e)) type = "CapacityError";
    if (dynamic_cast<const RangeError*>(&e)) type = "RangeError";
    if (dynamic_cast<const NumericalError*>(&e)) type = "NumericalError";
    std::cerr << Json{{"status", "error"}, {"config", path}, {"type", type}, {"message", e.what()}}
                     .dump(2)
              << '\n';
    return kExitRuntime;
  }
}

struct EmitOptions {
  std::string builder;
  int qubits = 4;
  bool echo = false;
  bool inline_form = false;
  double tau = 1.0;
  double pulse_duration = 0.0;
  std::string output;
};

int cmd_emit(const EmitOptions& o) {
  Json sequence;
  std::vector<std::string> channels;
  try {
    if (o.builder == "qft") {
      const auto spec = qft_circuit(o.qubits, o.echo);
      const std::vector<NoiseSpec> noise{
          {"y" + std::to_string(o.qubits), embed_pauli('Y', o.qubits - 1, o.qubits)}};
      channels = {noise[0].channel};
      sequence = o.inline_form ? sequence_to_json(build_sequence(spec, noise))
                               : circuit_to_json(spec, noise);
    } else {
      const NoiseSpec noise{"z", PauliString("Z").matrix()};
      channels = {"z"};
      if (o.builder == "fid") {
        sequence = sequence_to_json(fid_sequence(o.tau, noise));
      } else {
        PiPulse pulse;
        if (o.pulse_duration > 0.0) {
          pulse.mode = PiPulse::Mode::Finite;
          pulse.duration = o.pulse_duration;
          pulse.amplitude = std::acos(-1.0) / o.pulse_duration;
        }
        sequence = sequence_to_json(spin_echo_sequence(o.tau, pulse, noise));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << Json{{"status", "error"}, {"message", e.what()}}.dump(2) << '\n';
    return kExitRuntime;
  }
  const std::string text = emit_config(sequence, channels).dump(2) + "\n";
  if (o.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.output);
    out << text;
    if (!out) {
      std::cerr << Json{{"status", "error"}, {"message", "cannot write " + o.output}}.dump(2) << '\n';
      return kExitRuntime;
    }
  }
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ffcorr: filter functions, correlation infidelities and process maps"};
  app.require_subcommand(1);

  std::string config;
  std::string output_dir;
  unsigned threads = 0;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Run every task of a config file");
  run_cmd->add_option("config", config, "Config file (JSON)")->required();
  auto* out_opt = run_cmd->add_option("--output-dir", output_dir, "Overrides output_dir");
  auto* threads_opt = run_cmd->add_option("--threads", threads,
                                          "Worker threads (default: FFCORR_THREADS or all cores)")
                          ->check(CLI::PositiveNumber);
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Overrides the config seed");

  auto* validate_cmd = app.add_subcommand("validate", "Check a config file without computing");
  validate_cmd->add_option("config", config, "Config file (JSON)")->required();

  EmitOptions emit;
  auto* emit_cmd = app.add_subcommand("emit", "Print a config for a built-in sequence");
  emit_cmd->add_option("builder", emit.builder, "fid, spin_echo or qft")
      ->required()
      ->check(CLI::IsMember({"fid", "spin_echo", "qft"}));
  emit_cmd->add_option("--qubits", emit.qubits, "QFT register size")->check(CLI::Range(2, 5));
  emit_cmd->add_flag("--echo", emit.echo, "Insert echo pulses into the QFT");
  emit_cmd->add_flag("--inline", emit.inline_form, "Emit explicit segments instead of gates");
  emit_cmd->add_option("--tau", emit.tau, "Idle duration for fid and spin_echo")
      ->check(CLI::PositiveNumber);
  emit_cmd->add_option("--pulse-duration", emit.pulse_duration,
                       "Finite pi pulse length for spin_echo (0: instantaneous)")
      ->check(CLI::NonNegativeNumber);
  emit_cmd->add_option("-o,--output", emit.output, "Write to a file instead of stdout");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    RunOptions options;
    if (*out_opt) options.output_dir = output_dir;
    if (*threads_opt) options.threads = threads;
    if (*seed_opt) options.seed = seed;
    return cmd_run(config, options);
  }
  if (*validate_cmd) return cmd_validate(config);
  return cmd_emit(emit);
}
