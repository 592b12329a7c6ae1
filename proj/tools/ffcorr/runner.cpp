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
#include "runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <memory>

#include <Eigen/Core>

#include "ffcorr/basis.hpp"
#include "ffcorr/control_matrix.hpp"
#include "ffcorr/errors.hpp"
#include "ffcorr/filter_functions.hpp"
#include "ffcorr/montecarlo.hpp"
#include "ffcorr/parallel.hpp"
#include "ffcorr/process.hpp"

#ifndef FFCORR_VERSION
#define FFCORR_VERSION "unknown"
#endif

namespace ffcorr::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path) : out_(path), path_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
  }

  void header(const std::vector<std::string>& columns) { row_text(columns); }

  void row_text(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(fields[i]);
    }
    out_ << '\n';
  }

  CsvFile& text(const std::string& s) {
    sep();
    out_ << csv_field(s);
    return *this;
  }
  CsvFile& num(double v) {
    sep();
    out_ << format_double(v);
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }

  void close() {
    out_.close();
    if (!out_) throw Error("failed writing '" + path_.string() + "'");
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }

  std::ofstream out_;
  std::filesystem::path path_;
  bool first_ = true;
};

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string grid_type_name(const GridConfig& g) { return g.type; }

void write_matrix(const std::filesystem::path& path, const std::string& corner,
                  const std::vector<std::string>& labels, const RealMatrix& m) {
  CsvFile csv(path);
  std::vector<std::string> head{corner};
  head.insert(head.end(), labels.begin(), labels.end());
  csv.header(head);
  for (Index r = 0; r < m.rows(); ++r) {
    csv.text(labels[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < m.cols(); ++c) csv.num(m(r, c));
    csv.end();
  }
  csv.close();
}

Json diagnostics_json(const QuadratureDiagnostics& d) {
  return Json{{"tail_share", d.tail_share},
              {"zero_interval_share", d.zero_interval_share},
              {"last_decade_share", d.last_decade_share},
              {"warnings", d.warnings}};
}

class Runner {
 public:
  Runner(const RunConfig& cfg, const RunOptions& options, std::ostream& log)
      : cfg_(cfg),
        options_(options),
        log_(log),
        seq_(*cfg.sequence),
        basis_(OperatorBasis::pauli(qubits_of(seq_.dim()))),
        tau_(seq_.total_duration()) {
    compute_.threads = options.threads.value_or(0);
    grid_ = std::make_shared<const FrequencyGrid>(cfg.grid.build(tau_));
    report_.output_dir = options.output_dir.value_or(cfg.output_dir);
    seed_ = options.seed.value_or(cfg.seed);
    for (const auto& c : cfg.channels) ids_.push_back(c.id);
  }

  RunReport run() {
    std::filesystem::create_directories(report_.output_dir);
    Json tasks = Json::array();
    for (const auto& task : cfg_.tasks) {
      const auto path = report_.output_dir / unique_name(task.name);
      Json entry{{"name", task.name}, {"file", path.filename().string()}};
      if (!task.channels.empty()) entry["channels"] = task.channels;
      const auto t0 = std::chrono::steady_clock::now();
      run_task(task, path, entry);
      entry["seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      tasks.push_back(std::move(entry));
    }
    write_manifest(tasks);
    return report_;
  }

 private:
  static int qubits_of(Index dim) {
    int n = 0;
    while ((Index{1} << n) < dim) ++n;
    return n;
  }

  std::string unique_name(const std::string& task) {
    const int n = ++used_[task];
    return n == 1 ? task + ".csv" : task + "_" + std::to_string(n) + ".csv";
  }

  void warn(const std::string& message) {
    log_ << "warning: " << message << '\n';
    report_.warnings.push_back(message);
  }

  const ControlMatrix& control() {
    if (!control_) {
      control_ = std::make_unique<ControlMatrix>(control_matrix_freq(seq_, basis_, grid_, compute_));
    }
    return *control_;
  }

  const CorrelationFilterFunction& cff() {
    if (!cff_) {
      cff_ = std::make_unique<CorrelationFilterFunction>(
          correlation_ff(seq_, basis_, grid_, compute_));
    }
    return *cff_;
  }

  std::vector<std::size_t> selected(const TaskConfig& task) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < ids_.size(); ++a) {
      if (task.channels.empty() ||
          std::find(task.channels.begin(), task.channels.end(), ids_[a]) != task.channels.end()) {
        out.push_back(a);
      }
    }
    return out;
  }

  /// Spectra for every channel; channels outside the task get zero noise.
  std::vector<SpectralDensity> spectra(const TaskConfig& task) const {
    const auto sel = selected(task);
    std::vector<SpectralDensity> out;
    for (std::size_t a = 0; a < ids_.size(); ++a) {
      const bool on = std::find(sel.begin(), sel.end(), a) != sel.end();
      out.push_back(on ? *cfg_.channels[a].spectrum : SpectralDensity::white(0.0));
    }
    return out;
  }

  void note_diagnostics(const QuadratureDiagnostics& d, Json& entry, const std::string& task) {
    entry["quadrature"] = diagnostics_json(d);
    for (const auto& w : d.warnings) warn(task + ": " + w);
  }

  void run_task(const TaskConfig& task, const std::filesystem::path& path, Json& entry) {
    const auto sel = selected(task);
    const auto& w = grid_->values();
    if (task.name == "fidelity_ff") {
      const auto ff = fidelity_ff(control());
      CsvFile csv(path);
      std::vector<std::string> head{"omega"};
      for (auto a : sel) head.push_back("F_" + ids_[a]);
      csv.header(head);
      for (std::size_t i = 0; i < w.size(); ++i) {
        csv.num(w[i]);
        for (auto a : sel) csv.num(ff.values(static_cast<Index>(a), static_cast<Index>(i)));
        csv.end();
      }
      csv.close();
    } else if (task.name == "generalized_ff") {
      const auto gff = generalized_ff(control());
      CsvFile csv(path);
      csv.header({"omega", "channel", "k", "l", "re", "im"});
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (auto a : sel) {
          const Matrix m = gff.at(a, i);
          for (Index k = 0; k < m.rows(); ++k) {
            for (Index l = 0; l < m.cols(); ++l) {
              csv.num(w[i]).text(ids_[a]).text(basis_.label(k)).text(basis_.label(l));
              csv.num(m(k, l).real()).num(m(k, l).imag());
              csv.end();
            }
          }
        }
      }
      csv.close();
    } else if (task.name == "correlation_ff") {
      const auto& c = cff();
      const auto& labels = c.labels();
      const std::size_t gates = c.gate_count();
      CsvFile csv(path);
      csv.header({"omega", "channel", "g", "gp", "re", "im"});
      for (std::size_t i = 0; i < w.size(); ++i) {
        for (auto a : sel) {
          for (std::size_t gp = 0; gp < gates; ++gp) {
            for (std::size_t g = 0; g < gates; ++g) {
              const Complex v = c.at(a, g, gp, i);
              csv.num(w[i]).text(ids_[a]).text(labels[g]).text(labels[gp]);
              csv.num(v.real()).num(v.imag());
              csv.end();
            }
          }
        }
      }
      csv.close();
    } else if (task.name == "correlation_infidelities") {
      const auto s = spectra(task);
      const auto ci = correlation_infidelities(cff(), s, cfg_.quadrature);
      write_matrix(path, "gate", ci.labels, ci.total);
      report_.files.push_back(path);
      entry["sum"] = ci.sum();
      if (sel.size() > 1) {
        Json extra = Json::array();
        for (auto a : sel) {
          auto p = path;
          p.replace_filename(path.stem().string() + "_" + ids_[a] + ".csv");
          write_matrix(p, "gate", ci.labels, ci.per_channel[a]);
          report_.files.push_back(p);
          extra.push_back(p.filename().string());
        }
        entry["per_channel_files"] = std::move(extra);
      }
      return;
    } else if (task.name == "process" || task.name == "fidelity") {
      const auto s = spectra(task);
      const auto gamma = decay_amplitudes_freq(control(), s, cfg_.quadrature);
      note_diagnostics(gamma.diagnostics, entry, task.name);
      const auto fid = fidelity(gamma, seq_.dim());
      entry["infidelity"] = fid.infidelity;
      if (task.name == "process") {
        const auto map = process_map(gamma, basis_);
        std::vector<std::string> labels;
        for (Index k = 0; k < basis_.size(); ++k) labels.push_back(basis_.label(k));
        write_matrix(path, "k", labels, map.transfer);
        const RealVector eig = choi_eigenvalues(map, basis_);
        entry["choi_min_eigenvalue"] = eig.minCoeff();
        entry["choi_max_eigenvalue"] = eig.maxCoeff();
      } else {
        CsvFile csv(path);
        csv.header({"channel", "infidelity", "fidelity"});
        for (auto a : sel) {
          csv.text(ids_[a]).num(fid.per_channel_infidelity[a]).num(1.0 - fid.per_channel_infidelity[a]);
          csv.end();
        }
        csv.text("total").num(fid.infidelity).num(fid.fidelity);
        csv.end();
        csv.close();
      }
    } else if (task.name == "montecarlo_check") {
      const auto s = spectra(task);
      const auto gamma = decay_amplitudes_freq(control(), s, cfg_.quadrature);
      note_diagnostics(gamma.diagnostics, entry, task.name);
      const auto pert = process_map(gamma, basis_);
      const double pert_inf = fidelity(gamma, seq_.dim()).infidelity;
      TrajectoryConfig tc;
      tc.dt = cfg_.montecarlo.dt;
      tc.trajectories = cfg_.montecarlo.trajectories;
      tc.window_factor = cfg_.montecarlo.window_factor;
      tc.substeps = cfg_.montecarlo.substeps;
      tc.seed = seed_;
      tc.threads = options_.threads.value_or(0);
      const auto mc = simulate_process(seq_, s, basis_, tc);
      CsvFile csv(path);
      csv.header({"quantity", "perturbative", "montecarlo", "stderr", "deviation_in_stderr"});
      const auto row = [&](const std::string& name, double p, double m, double se) {
        csv.text(name).num(p).num(m).num(se).num(se > 0.0 ? (m - p) / se : 0.0);
        csv.end();
      };
      row("infidelity", pert_inf, mc.infidelity, mc.infidelity_stderr);
      for (Index k = 0; k < basis_.size(); ++k) {
        for (Index l = 0; l < basis_.size(); ++l) {
          row("T_" + basis_.label(k) + "_" + basis_.label(l), pert.transfer(k, l),
              mc.transfer_mean(k, l), mc.transfer_stderr(k, l));
        }
      }
      csv.close();
      entry["trajectories"] = mc.trajectories;
      entry["dt"] = mc.dt;
      entry["seed"] = seed_;
      entry["max_unitarity_error"] = mc.max_unitarity_error;
    }
    report_.files.push_back(path);
  }

  Json xi_json() {
    const bool all = std::all_of(cfg_.channels.begin(), cfg_.channels.end(),
                                 [](const ChannelConfig& c) { return c.spectrum.has_value(); });
    if (!all || cfg_.channels.empty()) return nullptr;
    std::vector<SpectralDensity> s;
    for (const auto& c : cfg_.channels) s.push_back(*c.spectrum);
    const double band = cfg_.white_band_limit > 0.0 ? cfg_.white_band_limit : grid_->back();
    const auto xi = xi_estimate(seq_, s, band);
    Json per = Json::object();
    for (std::size_t a = 0; a < ids_.size(); ++a) per[ids_[a]] = xi.per_channel[a];
    if (xi.total > 0.1) warn("noise strength xi = " + format_double(xi.total) + " exceeds 0.1");
    return Json{{"per_channel", per},
                {"total", xi.total},
                {"heuristic", xi.heuristic},
                {"white_band_limit", band}};
  }

  void write_manifest(const Json& tasks) {
    Json files = Json::array();
    for (const auto& f : report_.files) files.push_back(f.filename().string());
    Json seq{{"qubits", basis_.qubits()},
             {"dimension", seq_.dim()},
             {"duration", tau_},
             {"gates", seq_.gate_labels()},
             {"channels", ids_}};
    Json manifest{
        {"schema_version", kSchemaVersion},
        {"created", timestamp()},
        {"config", options_.config_path.string()},
        {"config_sha256", sha256_hex(options_.config_text)},
        {"versions",
         {{"ffcorr", FFCORR_VERSION},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}},
        {"seed", seed_},
        {"threads", compute_.threads == 0 ? default_thread_count() : compute_.threads},
        {"sequence", seq},
        {"grid",
         {{"type", grid_type_name(cfg_.grid)},
          {"size", grid_->size()},
          {"min", grid_->front()},
          {"max", grid_->back()}}},
        {"xi", xi_json()},
        {"tasks", tasks},
        {"files", files},
        {"warnings", report_.warnings}};
    const auto path = report_.output_dir / "manifest.json";
    std::ofstream out(path);
    out << manifest.dump(2) << '\n';
    if (!out) throw Error("failed writing '" + path.string() + "'");
  }

  const RunConfig& cfg_;
  const RunOptions& options_;
  std::ostream& log_;
  const PulseSequence& seq_;
  OperatorBasis basis_;
  double tau_;
  ComputeOptions compute_;
  std::shared_ptr<const FrequencyGrid> grid_;
  std::uint64_t seed_ = 0;
  std::vector<std::string> ids_;
  std::map<std::string, int> used_;
  std::unique_ptr<ControlMatrix> control_;
  std::unique_ptr<CorrelationFilterFunction> cff_;
  RunReport report_;
};

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

RunReport run(const RunConfig& cfg, const RunOptions& options, std::ostream& log) {
  if (!cfg.sequence) throw ValidationError("run config has no sequence");
  return Runner(cfg, options, log).run();
}

}  // namespace ffcorr::cli
