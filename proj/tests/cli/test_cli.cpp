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
#include <catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "runner.hpp"

using namespace ffcorr;
using namespace ffcorr::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kExe = FFCORR_EXECUTABLE;
const fs::path kTestConfigs = FFCORR_TEST_CONFIG_DIR;
const fs::path kExampleConfigs = FFCORR_EXAMPLE_CONFIG_DIR;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("ffcorr_cli_" + std::to_string(::getpid()) + "_" + std::to_string(++counter));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

Result invoke(const std::string& args, const TempDir& dir, const std::string& env = "") {
  const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = env + " \"" + kExe.string() + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_json(const fs::path& p, const Json& j) {
  std::ofstream(p) << j.dump(2);
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Json load(const fs::path& p) { return Json::parse(slurp(p)); }

bool has_violation(const std::vector<Violation>& vs, const std::string& path,
                   const std::string& fragment = "") {
  for (const auto& v : vs) {
    if (v.path == path && v.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("example configs validate", "[cli]") {
  TempDir dir;
  for (const auto& entry : fs::directory_iterator(kExampleConfigs)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path());
    const auto r = invoke("validate \"" + entry.path().string() + "\"", dir);
    CHECK(r.code == 0);
    const auto report = Json::parse(r.out);
    CHECK(report["valid"] == true);
    CHECK(report["violations"].empty());
  }
}

TEST_CASE("validation reports every violation at its field path", "[cli]") {
  const auto result = load_config(kTestConfigs / "invalid.json");
  REQUIRE_FALSE(result.config);
  const auto& v = result.violations;
  CHECK(has_violation(v, "/sequence/items/1/duration", "positive"));
  CHECK(has_violation(v, "/tasks/1", "allowed: fidelity_ff"));
  CHECK(has_violation(v, "/sequence/items/0/noise/q", "undefined channel 'q'"));
  CHECK(has_violation(v, "/grid/count"));
  CHECK(has_violation(v, "/channels/0/spectrum/omega_max", "must exceed omega_min"));
  CHECK(v.size() >= 5);

  TempDir dir;
  const auto r = invoke("validate \"" + (kTestConfigs / "invalid.json").string() + "\"", dir);
  CHECK(r.code == 2);
  const auto report = Json::parse(r.out);
  CHECK(report["valid"] == false);
  CHECK(report["violations"].size() == v.size());
}

TEST_CASE("schema checks on individual fields", "[cli]") {
  const auto base = load(kTestConfigs / "minimal.json");
  REQUIRE(parse_config(base, kTestConfigs).violations.empty());

  auto j = base;
  j["schema_version"] = 2;
  CHECK(has_violation(parse_config(j, ".").violations, "/schema_version", "unsupported"));

  j = base;
  j.erase("tasks");
  CHECK(has_violation(parse_config(j, ".").violations, "/tasks", "missing"));

  j = base;
  j["sequence"]["tau"] = -1.0;
  CHECK(has_violation(parse_config(j, ".").violations, "/sequence/tau", "positive"));

  j = base;
  j["sequence"]["noise"]["operator"] = Json{{"pauli", {{"ZZ", 1.0}}}};
  CHECK(has_violation(parse_config(j, ".").violations, "/sequence/noise/operator/pauli/ZZ"));

  j = base;
  j["sequence"]["noise"]["channel"] = "nope";
  CHECK(has_violation(parse_config(j, ".").violations, "/sequence/noise/channel",
                      "undefined channel 'nope'"));

  j = base;
  j["grid"] = Json{{"type", "spiral"}};
  CHECK(has_violation(parse_config(j, ".").violations, "/grid/type", "unknown grid type"));

  j = base;
  j["extra"] = 1;
  CHECK(has_violation(parse_config(j, ".").violations, "/extra", "unknown field"));

  j = base;
  j["tasks"] = Json::array({"fidelity"});
  j["channels"][0].erase("spectrum");
  CHECK(has_violation(parse_config(j, ".").violations, "/channels/0/spectrum", "needs a spectrum"));

  j = base;
  j["sequence"] = Json{{"builder", "inline"},
                       {"qubits", 1},
                       {"items", Json::array({Json{{"duration", 1.0},
                                                   {"hamiltonian",
                                                    {{"re", {{0.0, 1.0}, {0.0, 0.0}}}}}}})}};
  CHECK(has_violation(parse_config(j, ".").violations, "/sequence/items/0/hamiltonian",
                      "not Hermitian"));
}

TEST_CASE("undefined channel stops a run with a machine-readable error", "[cli]") {
  TempDir dir;
  auto j = load(kTestConfigs / "minimal.json");
  j["sequence"]["noise"]["channel"] = "x9";
  write_json(dir / "bad.json", j);
  const auto r = invoke("run \"" + (dir / "bad.json").string() + "\" --output-dir \"" +
                         (dir / "out").string() + "\"",
                     dir);
  CHECK(r.code != 0);
  const auto report = Json::parse(r.err);
  CHECK(report["status"] == "invalid");
  CHECK(report["violations"][0]["message"].get<std::string>().find("x9") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out" / "manifest.json"));
}

TEST_CASE("unreadable and malformed files are reported", "[cli]") {
  TempDir dir;
  auto r = invoke("validate \"" + (dir / "missing.json").string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(Json::parse(r.out)["violations"][0]["message"].get<std::string>().find("cannot read") !=
        std::string::npos);
  std::ofstream(dir / "broken.json") << "{\"schema_version\": 1,";
  r = invoke("validate \"" + (dir / "broken.json").string() + "\"", dir);
  CHECK(r.code == 2);
  CHECK(r.out.find("invalid JSON") != std::string::npos);
}

TEST_CASE("spin echo filter function CSV", "[cli]") {
  TempDir dir;
  const auto r = invoke("run \"" + (kExampleConfigs / "spin_echo.json").string() +
                         "\" --output-dir \"" + (dir / "out").string() + "\"",
                     dir);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "out" / "fidelity_ff.csv");
  REQUIRE(rows.size() == 401);
  CHECK(rows[0] == std::vector<std::string>{"omega", "F_z"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double w = std::stod(rows[i][0]);
    const double s = std::sin(0.5 * w);
    const double ref = 8.0 * s * s * s * s / (w * w);
    CHECK(std::abs(std::stod(rows[i][1]) - ref) <= 1e-9 * std::max(ref, 1e-300) + 1e-300);
  }
  const auto cff = read_csv(dir / "out" / "correlation_ff.csv");
  CHECK(cff[0] == std::vector<std::string>{"omega", "channel", "g", "gp", "re", "im"});
  CHECK(cff.size() == 1 + 400 * 9);
  const auto manifest = load(dir / "out" / "manifest.json");
  CHECK(manifest["config_sha256"] == sha256_hex(slurp(kExampleConfigs / "spin_echo.json")));
  CHECK(manifest["grid"]["size"] == 400);
  CHECK(manifest["sequence"]["gates"] == Json::array({"idle1", "pi", "idle2"}));
  CHECK(manifest["xi"]["total"].get<double>() > 0.0);
}

TEST_CASE("QFT correlation infidelities as a labelled matrix", "[cli]") {
  TempDir dir;
  auto j = load(kExampleConfigs / "qft_echo.json");
  j["grid"] = Json{{"type", "log_linear"}, {"min", 1e-4}, {"max", 1e3}, {"points_per_decade", 200},
                   {"max_step", 0.05}};
  write_json(dir / "qft.json", j);
  const auto r = invoke("run \"" + (dir / "qft.json").string() + "\" --output-dir \"" +
                         (dir / "out").string() + "\"",
                     dir);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(dir / "out" / "correlation_infidelities.csv");
  REQUIRE(rows.size() == 17);
  CHECK(rows[0].size() == 17);
  CHECK(rows[0][0] == "gate");
  CHECK(rows[0][1] == "g1_H_p1");
  CHECK(rows[16][0] == "g16_H_p1");
  double sum = 0.0, lowest = 0.0;
  for (std::size_t g = 1; g <= 16; ++g) {
    REQUIRE(rows[g].size() == 17);
    for (std::size_t h = 1; h <= 16; ++h) {
      const double v = std::stod(rows[g][h]);
      sum += v;
      if (g != h) lowest = std::min(lowest, v);
      CHECK(rows[g][h] == rows[h][g]);
    }
  }
  CHECK(lowest < 0.0);
  const auto fid = read_csv(dir / "out" / "fidelity.csv");
  CHECK(std::abs(sum - std::stod(fid.back()[1])) < 1e-9 * std::stod(fid.back()[1]));
}

TEST_CASE("outputs are byte-identical across thread counts", "[cli]") {
  TempDir dir;
  const auto cfg = (kExampleConfigs / "montecarlo.json").string();
  auto j = load(cfg);
  j["tasks"] = Json::array({"fidelity_ff", "generalized_ff", "correlation_ff", "process",
                            "fidelity", "correlation_infidelities", "montecarlo_check"});
  j["montecarlo"]["trajectories"] = 40;
  j["grid"] = Json{{"type", "logarithmic"}, {"min", 0.01}, {"max", 1000.0}, {"count", 1500}};
  write_json(dir / "all.json", j);
  const auto a = invoke("run \"" + (dir / "all.json").string() + "\" --threads 1 --output-dir \"" +
                         (dir / "a").string() + "\"",
                     dir);
  const auto b = invoke("run \"" + (dir / "all.json").string() + "\" --output-dir \"" +
                         (dir / "b").string() + "\"",
                     dir, "FFCORR_THREADS=3");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(load(dir / "a" / "manifest.json")["threads"] == 1);
  CHECK(load(dir / "b" / "manifest.json")["threads"] == 3);
  for (const auto& name : {"fidelity_ff.csv", "generalized_ff.csv", "correlation_ff.csv",
                           "process.csv", "fidelity.csv", "correlation_infidelities.csv",
                           "montecarlo_check.csv"}) {
    INFO(name);
    const auto text = slurp(dir / "a" / name);
    CHECK_FALSE(text.empty());
    CHECK(text == slurp(dir / "b" / name));
  }
}

TEST_CASE("seed flag overrides the config seed", "[cli]") {
  TempDir dir;
  auto j = load(kExampleConfigs / "montecarlo.json");
  j["tasks"] = Json::array({"montecarlo_check"});
  j["montecarlo"]["trajectories"] = 20;
  write_json(dir / "mc.json", j);
  const auto path = (dir / "mc.json").string();
  REQUIRE(invoke("run \"" + path + "\" --output-dir \"" + (dir / "a").string() + "\"", dir).code == 0);
  REQUIRE(invoke("run \"" + path + "\" --seed 8 --output-dir \"" + (dir / "b").string() + "\"", dir)
              .code == 0);
  REQUIRE(invoke("run \"" + path + "\" --seed 7 --output-dir \"" + (dir / "c").string() + "\"", dir)
              .code == 0);
  CHECK(load(dir / "b" / "manifest.json")["seed"] == 8);
  CHECK(slurp(dir / "a" / "montecarlo_check.csv") != slurp(dir / "b" / "montecarlo_check.csv"));
  CHECK(slurp(dir / "a" / "montecarlo_check.csv") == slurp(dir / "c" / "montecarlo_check.csv"));
}

TEST_CASE("emitted configs round-trip to identical results", "[cli]") {
  TempDir dir;
  const Json grid{{"type", "logarithmic"}, {"min", 1e-3}, {"max", 1e3}, {"count", 600}};
  const Json tasks = Json::array({"fidelity_ff", "correlation_infidelities"});
  const Json channels = Json::array(
      {Json{{"id", "y3"},
            {"spectrum",
             {{"type", "power_law"}, {"amplitude", 1e-4}, {"omega_min", 0.01}, {"omega_max", 10.0}}}}});

  const Json builder{{"schema_version", 1},
                     {"sequence",
                      {{"builder", "qft"},
                       {"qubits", 3},
                       {"echo", true},
                       {"noise", Json::array({Json{{"channel", "y3"},
                                                   {"operator", {{"pauli", {{"IIY", 1.0}}}}}}})}}},
                     {"channels", channels},
                     {"grid", grid},
                     {"tasks", tasks}};
  write_json(dir / "builder.json", builder);

  for (const std::string form : {"", "--inline"}) {
    INFO(form);
    const auto emitted = dir / ("emitted" + form + ".json");
    REQUIRE(invoke("emit qft --qubits 3 --echo " + form + " -o \"" + emitted.string() + "\"", dir)
                .code == 0);
    auto j = load(emitted);
    CHECK(parse_config(j, dir.path()).violations.empty());
    j["channels"] = channels;
    j["grid"] = grid;
    j["tasks"] = tasks;
    write_json(emitted, j);
    const auto out_a = dir / "a", out_b = dir / ("b" + form);
    REQUIRE(invoke("run \"" + (dir / "builder.json").string() + "\" --output-dir \"" +
                    out_a.string() + "\"",
                dir)
                .code == 0);
    REQUIRE(invoke("run \"" + emitted.string() + "\" --output-dir \"" + out_b.string() + "\"", dir)
                .code == 0);
    for (const auto& name : {"fidelity_ff.csv", "correlation_infidelities.csv"}) {
      CHECK(slurp(out_a / name) == slurp(out_b / name));
    }
  }

  for (const std::string args : {"fid --tau 2", "spin_echo --tau 0.5 --pulse-duration 0.1"}) {
    INFO(args);
    const auto r = invoke("emit " + args, dir);
    REQUIRE(r.code == 0);
    CHECK(parse_config(Json::parse(r.out), dir.path()).violations.empty());
  }
}

TEST_CASE("tabulated spectrum files resolve relative to the config", "[cli]") {
  TempDir dir;
  std::ofstream(dir / "psd.txt") << "# omega psd\n0.1 1e-3\n1 1e-4\n10 1e-5\n100 1e-6\n";
  auto j = load(kTestConfigs / "minimal.json");
  j["channels"][0]["spectrum"] = Json{{"type", "tabulated"}, {"file", "psd.txt"}};
  j["tasks"] = Json::array({"fidelity"});
  write_json(dir / "tab.json", j);
  const auto r = invoke("run \"" + (dir / "tab.json").string() + "\" --output-dir \"" +
                         (dir / "out").string() + "\"",
                     dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "out" / "fidelity.csv"));

  j["channels"][0]["spectrum"]["file"] = "nope.txt";
  CHECK(has_violation(parse_config(j, dir.path()).violations, "/channels/0/spectrum/file"));
}

TEST_CASE("task channel subsets", "[cli]") {
  TempDir dir;
  const auto j = load(kTestConfigs / "two_channels.json");
  const auto parsed = parse_config(j, kTestConfigs);
  REQUIRE(parsed.violations.empty());
  std::ostringstream log;
  RunOptions options;
  options.output_dir = dir / "out";
  const auto report = run(*parsed.config, options, log);
  CHECK(report.files.size() == 6);
  const auto ff = read_csv(dir / "out" / "fidelity_ff.csv");
  CHECK(ff[0] == std::vector<std::string>{"omega", "F_x"});
  const auto both = read_csv(dir / "out" / "fidelity.csv");
  const auto only_z = read_csv(dir / "out" / "fidelity_2.csv");
  REQUIRE(both.size() == 4);
  REQUIRE(only_z.size() == 3);
  CHECK(std::stod(only_z[1][1]) == std::stod(both[2][1]));
  CHECK(fs::exists(dir / "out" / "correlation_infidelities_x.csv"));
  CHECK(fs::exists(dir / "out" / "correlation_infidelities_z.csv"));
}

TEST_CASE("format_double round-trips", "[cli]") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
