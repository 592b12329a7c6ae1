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
#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ffcorr/basis.hpp"
#include "ffcorr/errors.hpp"

namespace ffcorr::cli {

namespace {

std::string child(const std::string& path, const std::string& key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') {
      escaped += "~0";
    } else if (c == '/') {
      escaped += "~1";
    } else {
      escaped += c;
    }
  }
  return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Violation>& out) : out_(out) {}

  void error(const std::string& path, const std::string& message) {
    out_.push_back({path, message});
  }
  std::size_t errors() const { return out_.size(); }

  bool object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      error(path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        std::vector<std::string> names(allowed.begin(), allowed.end());
        error(child(path, key), "unknown field; allowed: " + join(names));
      }
    }
    return true;
  }

  const Json* member(const Json& obj, const char* key, const std::string& path, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) error(child(path, key), "required field is missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const Json& obj, const char* key, const std::string& path,
                               bool required, bool positive = false, bool nonnegative = false) {
    const Json* j = member(obj, key, path, required);
    if (!j) return std::nullopt;
    if (!j->is_number()) {
      error(child(path, key), "expected a number");
      return std::nullopt;
    }
    const double v = j->get<double>();
    if (!std::isfinite(v)) {
      error(child(path, key), "must be finite");
      return std::nullopt;
    }
    if (positive && !(v > 0.0)) {
      error(child(path, key), "must be positive, got " + j->dump());
      return std::nullopt;
    }
    if (nonnegative && v < 0.0) {
      error(child(path, key), "must be non-negative, got " + j->dump());
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::int64_t> integer(const Json& obj, const char* key, const std::string& path,
                                      bool required, std::int64_t lo, std::int64_t hi) {
    const Json* j = member(obj, key, path, required);
    if (!j) return std::nullopt;
    if (!j->is_number_integer()) {
      error(child(path, key), "expected an integer");
      return std::nullopt;
    }
    const auto v = j->get<std::int64_t>();
    if (v < lo || v > hi) {
      error(child(path, key),
            "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                std::to_string(v));
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const Json& obj, const char* key, const std::string& path,
                                    bool required) {
    const Json* j = member(obj, key, path, required);
    if (!j) return std::nullopt;
    if (!j->is_string()) {
      error(child(path, key), "expected a string");
      return std::nullopt;
    }
    return j->get<std::string>();
  }

  std::optional<bool> boolean(const Json& obj, const char* key, const std::string& path) {
    const Json* j = member(obj, key, path, false);
    if (!j) return std::nullopt;
    if (!j->is_boolean()) {
      error(child(path, key), "expected true or false");
      return std::nullopt;
    }
    return j->get<bool>();
  }

  std::optional<std::vector<double>> numbers(const Json& obj, const char* key,
                                             const std::string& path, bool required) {
    const Json* j = member(obj, key, path, required);
    if (!j) return std::nullopt;
    const std::string p = child(path, key);
    if (!j->is_array()) {
      error(p, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    bool ok = true;
    for (std::size_t i = 0; i < j->size(); ++i) {
      if (!(*j)[i].is_number()) {
        error(child(p, i), "expected a number");
        ok = false;
      } else {
        out.push_back((*j)[i].get<double>());
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

 private:
  std::vector<Violation>& out_;
};

std::optional<RealMatrix> real_block(Reader& r, const Json& j, const std::string& path, Index d) {
  if (!j.is_array() || static_cast<Index>(j.size()) != d) {
    r.error(path, "expected " + std::to_string(d) + " rows");
    return std::nullopt;
  }
  RealMatrix m(d, d);
  for (Index i = 0; i < d; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rp = child(path, static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != d) {
      r.error(rp, "expected " + std::to_string(d) + " columns");
      return std::nullopt;
    }
    for (Index k = 0; k < d; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) {
        r.error(child(rp, static_cast<std::size_t>(k)), "expected a number");
        return std::nullopt;
      }
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

/// {"pauli": {"XZ": 0.5}} or {"re": [[...]], "im": [[...]]}.
std::optional<Matrix> parse_operator(Reader& r, const Json& j, const std::string& path,
                                     int qubits, bool hermitian) {
  if (!r.object(j, path, {"pauli", "re", "im"})) return std::nullopt;
  const Index d = Index{1} << qubits;
  if (j.contains("pauli")) {
    const std::string pp = child(path, "pauli");
    if (j.contains("re") || j.contains("im")) {
      r.error(path, "give either pauli or re/im, not both");
      return std::nullopt;
    }
    const Json& terms = j["pauli"];
    if (!terms.is_object()) {
      r.error(pp, "expected an object of Pauli label to coefficient");
      return std::nullopt;
    }
    Matrix m = Matrix::Zero(d, d);
    bool ok = true;
    for (const auto& [label, coeff] : terms.items()) {
      const std::string lp = child(pp, label);
      if (static_cast<int>(label.size()) != qubits ||
          label.find_first_not_of("IXYZ") != std::string::npos) {
        r.error(lp, "Pauli label must have " + std::to_string(qubits) + " letters from IXYZ");
        ok = false;
        continue;
      }
      if (!coeff.is_number()) {
        r.error(lp, "expected a number");
        ok = false;
        continue;
      }
      m += coeff.get<double>() * PauliString(label).matrix();
    }
    if (!ok) return std::nullopt;
    return m;
  }
  if (!j.contains("re")) {
    r.error(path, "operator needs pauli or re/im");
    return std::nullopt;
  }
  const auto re = real_block(r, j["re"], child(path, "re"), d);
  std::optional<RealMatrix> im = RealMatrix::Zero(d, d);
  if (j.contains("im")) im = real_block(r, j["im"], child(path, "im"), d);
  if (!re || !im) return std::nullopt;
  Matrix m(d, d);
  m.real() = *re;
  m.imag() = *im;
  if (hermitian && anti_hermitian_norm(m) > 1e-10) {
    std::ostringstream msg;
    msg << "operator is not Hermitian (anti-Hermitian norm " << anti_hermitian_norm(m) << ")";
    r.error(path, msg.str());
    return std::nullopt;
  }
  if (!hermitian && unitarity_error(m) > 1e-10) {
    std::ostringstream msg;
    msg << "operator is not unitary (error " << unitarity_error(m) << ")";
    r.error(path, msg.str());
    return std::nullopt;
  }
  return m;
}

std::optional<SpectralDensity> parse_spectrum(Reader& r, const Json& j, const std::string& path,
                                              const std::filesystem::path& base_dir) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return std::nullopt;
  }
  const auto type = r.string(j, "type", path, true);
  if (!type) return std::nullopt;
  const std::size_t before = r.errors();
  if (*type == "white") {
    r.object(j, path, {"type", "psd"});
    const auto psd = r.number(j, "psd", path, true, false, true);
    if (r.errors() != before) return std::nullopt;
    return SpectralDensity::white(*psd);
  }
  if (*type == "power_law") {
    r.object(j, path, {"type", "amplitude", "exponent", "omega_min", "omega_max"});
    const auto amp = r.number(j, "amplitude", path, true, false, true);
    const auto exponent = r.number(j, "exponent", path, false);
    const auto lo = r.number(j, "omega_min", path, true, true);
    const auto hi = r.number(j, "omega_max", path, true, true);
    if (lo && hi && *hi <= *lo) r.error(child(path, "omega_max"), "must exceed omega_min");
    if (r.errors() != before) return std::nullopt;
    return SpectralDensity::power_law(*amp, exponent.value_or(1.0), *lo, *hi);
  }
  if (*type == "tabulated") {
    r.object(j, path, {"type", "file", "omega", "psd"});
    if (j.contains("file")) {
      const auto file = r.string(j, "file", path, true);
      if (!file) return std::nullopt;
      std::filesystem::path p(*file);
      if (p.is_relative()) p = base_dir / p;
      try {
        return SpectralDensity::load_tabulated(p);
      } catch (const Error& e) {
        r.error(child(path, "file"), e.what());
        return std::nullopt;
      }
    }
    const auto omega = r.numbers(j, "omega", path, true);
    const auto psd = r.numbers(j, "psd", path, true);
    if (!omega || !psd) return std::nullopt;
    try {
      return SpectralDensity::tabulated(*omega, *psd);
    } catch (const Error& e) {
      r.error(path, e.what());
      return std::nullopt;
    }
  }
  r.error(child(path, "type"), "unknown spectrum type '" + *type +
                                   "'; allowed: white, power_law, tabulated");
  return std::nullopt;
}

void parse_grid(Reader& r, const Json& j, const std::string& path, GridConfig& g) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return;
  }
  const auto type = r.string(j, "type", path, true);
  if (!type) return;
  g.type = *type;
  const std::size_t before = r.errors();
  if (g.type == "default") {
    r.object(j, path, {"type"});
  } else if (g.type == "linear" || g.type == "logarithmic") {
    r.object(j, path, {"type", "min", "max", "count"});
    const auto lo = r.number(j, "min", path, true, g.type == "logarithmic", true);
    const auto hi = r.number(j, "max", path, true, true);
    const auto count = r.integer(j, "count", path, true, 2, 100000000);
    if (lo && hi && *hi <= *lo) r.error(child(path, "max"), "must exceed min");
    if (r.errors() == before) {
      g.min = *lo;
      g.max = *hi;
      g.count = static_cast<std::size_t>(*count);
    }
  } else if (g.type == "log_linear") {
    r.object(j, path, {"type", "min", "max", "points_per_decade", "max_step"});
    const auto lo = r.number(j, "min", path, true, true);
    const auto hi = r.number(j, "max", path, true, true);
    const auto ppd = r.number(j, "points_per_decade", path, true, true);
    const auto step = r.number(j, "max_step", path, true, true);
    if (lo && hi && *hi <= *lo) r.error(child(path, "max"), "must exceed min");
    if (r.errors() == before) {
      g.min = *lo;
      g.max = *hi;
      g.points_per_decade = *ppd;
      g.max_step = *step;
    }
  } else if (g.type == "values") {
    r.object(j, path, {"type", "values"});
    const auto values = r.numbers(j, "values", path, true);
    if (values) {
      if (values->empty()) r.error(child(path, "values"), "must not be empty");
      for (std::size_t i = 0; i < values->size(); ++i) {
        const double w = (*values)[i];
        if (!(w > 0.0) || (i > 0 && !(w > (*values)[i - 1]))) {
          r.error(child(child(path, "values"), i), "values must be positive and increasing");
          break;
        }
      }
      g.values = *values;
    }
  } else {
    r.error(child(path, "type"), "unknown grid type '" + g.type +
                                     "'; allowed: default, linear, logarithmic, log_linear, values");
  }
}

std::optional<TimingModel> parse_timing(Reader& r, const Json& j, const std::string& path) {
  TimingModel t;
  if (!r.object(j, path, {"single_qubit", "two_qubit", "echo_pulse"})) return std::nullopt;
  const std::size_t before = r.errors();
  if (auto v = r.number(j, "single_qubit", path, false, true)) t.single_qubit = *v;
  if (auto v = r.number(j, "two_qubit", path, false, true)) t.two_qubit = *v;
  if (auto v = r.number(j, "echo_pulse", path, false, false, true)) t.echo_pulse = *v;
  if (r.errors() != before) return std::nullopt;
  return t;
}

std::optional<NoiseSpec> parse_noise(Reader& r, const Json& j, const std::string& path,
                                     int qubits) {
  if (!r.object(j, path, {"channel", "operator"})) return std::nullopt;
  const auto channel = r.string(j, "channel", path, true);
  const Json* op = r.member(j, "operator", path, true);
  if (!channel || !op) return std::nullopt;
  const auto m = parse_operator(r, *op, child(path, "operator"), qubits, true);
  if (!m) return std::nullopt;
  return NoiseSpec{*channel, *m};
}

std::vector<NoiseSpec> parse_noise_list(Reader& r, const Json& obj, const std::string& path,
                                        int qubits) {
  std::vector<NoiseSpec> out;
  const Json* j = r.member(obj, "noise", path, true);
  if (!j) return out;
  const std::string p = child(path, "noise");
  if (!j->is_array()) {
    r.error(p, "expected an array of {channel, operator}");
    return out;
  }
  for (std::size_t i = 0; i < j->size(); ++i) {
    if (auto n = parse_noise(r, (*j)[i], child(p, i), qubits)) out.push_back(*n);
  }
  return out;
}

const std::map<std::string, CircuitGate::Kind>& gate_kinds() {
  static const std::map<std::string, CircuitGate::Kind> kinds{
      {"H", CircuitGate::Kind::Hadamard},
      {"RX", CircuitGate::Kind::RotationX},
      {"CP", CircuitGate::Kind::CPhase},
      {"SWAP", CircuitGate::Kind::Swap},
      {"IDLE", CircuitGate::Kind::Idle},
  };
  return kinds;
}

std::string kind_name(CircuitGate::Kind k) {
  for (const auto& [name, kind] : gate_kinds()) {
    if (kind == k) return name;
  }
  return "IDLE";
}

std::optional<CircuitSpec> parse_circuit(Reader& r, const Json& j, const std::string& path) {
  CircuitSpec spec;
  const std::size_t before = r.errors();
  const auto qubits = r.integer(j, "qubits", path, true, 1, kMaxQubits);
  if (!qubits) return std::nullopt;
  spec.qubits = static_cast<int>(*qubits);
  if (const Json* t = r.member(j, "timing", path, false)) {
    if (auto tm = parse_timing(r, *t, child(path, "timing"))) spec.timing = *tm;
  }
  const Json* gates = r.member(j, "gates", path, true);
  const std::string gp = child(path, "gates");
  if (gates && !gates->is_array()) r.error(gp, "expected an array");
  if (gates && gates->is_array()) {
    for (std::size_t i = 0; i < gates->size(); ++i) {
      const Json& g = (*gates)[i];
      const std::string p = child(gp, i);
      if (!r.object(g, p, {"kind", "qubits", "angle", "label", "duration"})) continue;
      CircuitGate gate;
      if (auto kind = r.string(g, "kind", p, true)) {
        const auto it = gate_kinds().find(*kind);
        if (it == gate_kinds().end()) {
          r.error(child(p, "kind"), "unknown gate kind '" + *kind +
                                        "'; allowed: H, RX, CP, SWAP, IDLE");
        } else {
          gate.kind = it->second;
        }
      }
      if (const Json* q = r.member(g, "qubits", p, true)) {
        if (!q->is_array()) {
          r.error(child(p, "qubits"), "expected an array of qubit indices");
        } else {
          for (std::size_t k = 0; k < q->size(); ++k) {
            if (!(*q)[k].is_number_integer()) {
              r.error(child(child(p, "qubits"), k), "expected an integer");
            } else {
              gate.qubits.push_back((*q)[k].get<int>());
            }
          }
        }
      }
      if (auto a = r.number(g, "angle", p, false)) gate.angle = *a;
      if (auto l = r.string(g, "label", p, false)) gate.label = *l;
      if (auto d = r.number(g, "duration", p, false, false, true)) gate.duration = *d;
      spec.gates.push_back(gate);
    }
  }
  if (const Json* echoes = r.member(j, "echoes", path, false)) {
    const std::string ep = child(path, "echoes");
    if (!echoes->is_array()) {
      r.error(ep, "expected an array");
    } else {
      for (std::size_t i = 0; i < echoes->size(); ++i) {
        const std::string p = child(ep, i);
        if (!r.object((*echoes)[i], p, {"qubit", "time"})) continue;
        const auto q = r.integer((*echoes)[i], "qubit", p, true, 0, kMaxQubits - 1);
        const auto t = r.number((*echoes)[i], "time", p, true, false, true);
        if (q && t) spec.echoes.push_back(EchoPulse{static_cast<int>(*q), *t});
      }
    }
  }
  if (r.errors() != before) return std::nullopt;
  return spec;
}

/// Reorders the noise channels of \p seq to \p ids, inserting zero operators
/// for channels the sequence does not couple to.
PulseSequence with_channels(const PulseSequence& seq, const std::vector<std::string>& ids) {
  if (seq.channels() == ids) return seq;
  const Index d = seq.dim();
  std::vector<Item> items;
  for (const auto& item : seq.items()) {
    if (const auto* s = std::get_if<Segment>(&item)) {
      Segment out{s->duration, s->hamiltonian, {}};
      for (const auto& id : ids) {
        const auto& from = seq.channels();
        const auto it = std::find(from.begin(), from.end(), id);
        out.noise.push_back(it == from.end()
                                ? Matrix::Zero(d, d)
                                : s->noise[static_cast<std::size_t>(it - from.begin())]);
      }
      items.emplace_back(std::move(out));
    } else {
      items.push_back(item);
    }
  }
  return PulseSequence(d, ids, std::move(items), seq.gates());
}

std::optional<PulseSequence> parse_inline(Reader& r, const Json& j, const std::string& path,
                                          const std::vector<std::string>& ids) {
  const auto qubits = r.integer(j, "qubits", path, true, 1, kMaxQubits);
  const Json* items = r.member(j, "items", path, true);
  if (!qubits || !items) return std::nullopt;
  const int n = static_cast<int>(*qubits);
  const Index d = Index{1} << n;
  const std::string ip = child(path, "items");
  if (!items->is_array() || items->empty()) {
    r.error(ip, "expected a non-empty array of items");
    return std::nullopt;
  }
  const std::size_t before = r.errors();
  std::vector<Item> out;
  std::vector<std::optional<std::string>> labels;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const Json& it = (*items)[i];
    const std::string p = child(ip, i);
    if (!r.object(it, p, {"gate", "duration", "hamiltonian", "noise", "unitary"})) continue;
    labels.push_back(r.string(it, "gate", p, false));
    if (it.contains("unitary")) {
      if (it.contains("duration") || it.contains("hamiltonian") || it.contains("noise")) {
        r.error(p, "an instantaneous item takes only gate and unitary");
        continue;
      }
      if (auto u = parse_operator(r, it["unitary"], child(p, "unitary"), n, false)) {
        out.emplace_back(InstantaneousGate{*u});
      }
      continue;
    }
    Segment seg;
    if (auto dur = r.number(it, "duration", p, true, true)) seg.duration = *dur;
    seg.hamiltonian = Matrix::Zero(d, d);
    if (const Json* h = r.member(it, "hamiltonian", p, false)) {
      if (auto m = parse_operator(r, *h, child(p, "hamiltonian"), n, true)) seg.hamiltonian = *m;
    }
    seg.noise.assign(ids.size(), Matrix::Zero(d, d));
    if (const Json* noise = r.member(it, "noise", p, false)) {
      const std::string np = child(p, "noise");
      if (!noise->is_object()) {
        r.error(np, "expected an object of channel id to operator");
      } else {
        for (const auto& [id, op] : noise->items()) {
          const auto pos = std::find(ids.begin(), ids.end(), id);
          if (pos == ids.end()) {
            r.error(child(np, id), "undefined channel '" + id + "'");
            continue;
          }
          if (auto m = parse_operator(r, op, child(np, id), n, true)) {
            seg.noise[static_cast<std::size_t>(pos - ids.begin())] = *m;
          }
        }
      }
    }
    out.emplace_back(std::move(seg));
  }
  if (r.errors() != before) return std::nullopt;

  std::vector<GateSpan> spans;
  const bool any = std::any_of(labels.begin(), labels.end(), [](const auto& l) { return l.has_value(); });
  if (any) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!labels[i]) {
        r.error(child(child(ip, i), "gate"), "either every item or no item names its gate");
        return std::nullopt;
      }
      if (!spans.empty() && spans.back().label == *labels[i]) {
        spans.back().end = i + 1;
        continue;
      }
      if (!seen.insert(*labels[i]).second) {
        r.error(child(child(ip, i), "gate"),
                "items of gate '" + *labels[i] + "' must be consecutive");
        return std::nullopt;
      }
      spans.push_back(GateSpan{*labels[i], i, i + 1});
    }
  }
  try {
    return PulseSequence(d, ids, std::move(out), std::move(spans));
  } catch (const Error& e) {
    r.error(path, e.what());
    return std::nullopt;
  }
}

std::optional<PulseSequence> parse_sequence(Reader& r, const Json& j, const std::string& path,
                                            const std::vector<std::string>& ids) {
  if (!j.is_object()) {
    r.error(path, "expected an object");
    return std::nullopt;
  }
  const auto builder = r.string(j, "builder", path, true);
  if (!builder) return std::nullopt;
  const std::size_t before = r.errors();

  const auto check_channels = [&](const std::vector<NoiseSpec>& noise,
                                  const std::string& noise_path) {
    for (std::size_t i = 0; i < noise.size(); ++i) {
      if (std::find(ids.begin(), ids.end(), noise[i].channel) == ids.end()) {
        r.error(noise_path.empty() ? child(child(path, "noise"), "channel")
                                   : child(child(noise_path, i), "channel"),
                "undefined channel '" + noise[i].channel + "'");
      }
    }
  };

  try {
    if (*builder == "inline") {
      r.object(j, path, {"builder", "qubits", "items"});
      return parse_inline(r, j, path, ids);
    }
    if (*builder == "fid" || *builder == "spin_echo") {
      const bool fid = *builder == "fid";
      if (fid) {
        r.object(j, path, {"builder", "tau", "noise"});
      } else {
        r.object(j, path, {"builder", "tau_idle", "pulse", "noise"});
      }
      const auto tau = r.number(j, fid ? "tau" : "tau_idle", path, true, true);
      const Json* nj = r.member(j, "noise", path, true);
      std::optional<NoiseSpec> noise;
      if (nj) noise = parse_noise(r, *nj, child(path, "noise"), 1);
      PiPulse pulse;
      if (!fid) {
        if (const Json* pj = r.member(j, "pulse", path, false)) {
          const std::string pp = child(path, "pulse");
          if (r.object(*pj, pp, {"mode", "duration", "amplitude"})) {
            const auto mode = r.string(*pj, "mode", pp, true);
            if (mode && *mode == "finite") {
              pulse.mode = PiPulse::Mode::Finite;
              if (auto v = r.number(*pj, "duration", pp, true, true)) pulse.duration = *v;
              if (auto v = r.number(*pj, "amplitude", pp, true, true)) pulse.amplitude = *v;
            } else if (mode && *mode != "instantaneous") {
              r.error(child(pp, "mode"), "unknown pulse mode '" + *mode +
                                             "'; allowed: instantaneous, finite");
            }
          }
        }
      }
      if (noise) check_channels({*noise}, "");
      if (r.errors() != before) return std::nullopt;
      const auto seq = fid ? fid_sequence(*tau, *noise) : spin_echo_sequence(*tau, pulse, *noise);
      return with_channels(seq, ids);
    }
    if (*builder == "qft") {
      r.object(j, path, {"builder", "qubits", "echo", "timing", "noise"});
      const auto qubits = r.integer(j, "qubits", path, true, 2, kMaxQubits);
      const bool echo = r.boolean(j, "echo", path).value_or(false);
      TimingModel timing;
      if (const Json* t = r.member(j, "timing", path, false)) {
        if (auto tm = parse_timing(r, *t, child(path, "timing"))) timing = *tm;
      }
      if (!qubits) return std::nullopt;
      const auto noise = parse_noise_list(r, j, path, static_cast<int>(*qubits));
      check_channels(noise, child(path, "noise"));
      if (r.errors() != before) return std::nullopt;
      const auto spec = qft_circuit(static_cast<int>(*qubits), echo, timing);
      return with_channels(build_sequence(spec, noise), ids);
    }
    if (*builder == "circuit") {
      r.object(j, path, {"builder", "qubits", "gates", "echoes", "timing", "noise"});
      const auto spec = parse_circuit(r, j, path);
      if (!spec) return std::nullopt;
      const auto noise = parse_noise_list(r, j, path, spec->qubits);
      check_channels(noise, child(path, "noise"));
      if (r.errors() != before) return std::nullopt;
      return with_channels(build_sequence(*spec, noise), ids);
    }
  } catch (const Error& e) {
    r.error(path, e.what());
    return std::nullopt;
  }
  r.error(child(path, "builder"), "unknown builder '" + *builder +
                                      "'; allowed: inline, fid, spin_echo, qft, circuit");
  return std::nullopt;
}

bool needs_spectra(const std::string& task) {
  return task == "fidelity" || task == "process" || task == "correlation_infidelities" ||
         task == "montecarlo_check";
}

}  // namespace

FrequencyGrid GridConfig::build(double tau) const {
  if (type == "linear") return FrequencyGrid::linear(min, max, count);
  if (type == "logarithmic") return FrequencyGrid::logarithmic(min, max, count);
  if (type == "log_linear") return FrequencyGrid::log_linear(min, max, points_per_decade, max_step);
  if (type == "values") return FrequencyGrid::from_values(values);
  return FrequencyGrid::default_for(tau);
}

const std::vector<std::string>& task_names() {
  static const std::vector<std::string> names{
      "fidelity_ff", "generalized_ff",           "correlation_ff",  "process",
      "fidelity",    "correlation_infidelities", "montecarlo_check"};
  return names;
}

ParseResult parse_config(const Json& doc, const std::filesystem::path& base_dir) {
  ParseResult result;
  Reader r(result.violations);
  RunConfig cfg;
  if (!r.object(doc, "",
                {"schema_version", "sequence", "channels", "grid", "tasks", "quadrature",
                 "montecarlo", "seed", "output_dir", "white_band_limit"})) {
    return result;
  }
  if (auto v = r.integer(doc, "schema_version", "", true, 0, 1000000)) {
    if (*v != kSchemaVersion) {
      r.error("/schema_version", "unsupported schema version " + std::to_string(*v) +
                                     "; this build reads version " +
                                     std::to_string(kSchemaVersion));
    }
  }

  std::vector<std::string> ids;
  if (const Json* channels = r.member(doc, "channels", "", true)) {
    if (!channels->is_array()) {
      r.error("/channels", "expected an array");
    } else {
      for (std::size_t i = 0; i < channels->size(); ++i) {
        const std::string p = child("/channels", i);
        const Json& c = (*channels)[i];
        if (!r.object(c, p, {"id", "spectrum"})) continue;
        const auto id = r.string(c, "id", p, true);
        if (!id) continue;
        if (id->empty()) {
          r.error(child(p, "id"), "must not be empty");
          continue;
        }
        if (std::find(ids.begin(), ids.end(), *id) != ids.end()) {
          r.error(child(p, "id"), "duplicate channel '" + *id + "'");
          continue;
        }
        ids.push_back(*id);
        ChannelConfig cc{*id, std::nullopt};
        if (const Json* s = r.member(c, "spectrum", p, false)) {
          cc.spectrum = parse_spectrum(r, *s, child(p, "spectrum"), base_dir);
        }
        cfg.channels.push_back(std::move(cc));
      }
    }
  }

  if (const Json* seq = r.member(doc, "sequence", "", true)) {
    cfg.sequence = parse_sequence(r, *seq, "/sequence", ids);
  }
  if (const Json* grid = r.member(doc, "grid", "", false)) parse_grid(r, *grid, "/grid", cfg.grid);

  if (const Json* tasks = r.member(doc, "tasks", "", true)) {
    if (!tasks->is_array() || tasks->empty()) {
      r.error("/tasks", "expected a non-empty array");
    } else {
      for (std::size_t i = 0; i < tasks->size(); ++i) {
        const std::string p = child("/tasks", i);
        const Json& t = (*tasks)[i];
        TaskConfig task;
        std::string name_path = p;
        if (t.is_string()) {
          task.name = t.get<std::string>();
        } else if (t.is_object()) {
          r.object(t, p, {"name", "channels"});
          name_path = child(p, "name");
          if (auto n = r.string(t, "name", p, true)) task.name = *n;
          if (const Json* cs = r.member(t, "channels", p, false)) {
            const std::string cp = child(p, "channels");
            if (!cs->is_array()) {
              r.error(cp, "expected an array of channel ids");
            } else {
              for (std::size_t k = 0; k < cs->size(); ++k) {
                const Json& c = (*cs)[k];
                if (!c.is_string()) {
                  r.error(child(cp, k), "expected a channel id");
                } else if (std::find(ids.begin(), ids.end(), c.get<std::string>()) == ids.end()) {
                  r.error(child(cp, k), "undefined channel '" + c.get<std::string>() + "'");
                } else {
                  task.channels.push_back(c.get<std::string>());
                }
              }
            }
          }
        } else {
          r.error(p, "expected a task name or {name, channels}");
          continue;
        }
        if (task.name.empty()) continue;
        const auto& names = task_names();
        if (std::find(names.begin(), names.end(), task.name) == names.end()) {
          r.error(name_path, "unknown task '" + task.name + "'; allowed: " + join(names));
          continue;
        }
        if (needs_spectra(task.name)) {
          const auto& used = task.channels.empty() ? ids : task.channels;
          for (const auto& c : cfg.channels) {
            if (std::find(used.begin(), used.end(), c.id) != used.end() && !c.spectrum) {
              const auto pos = std::find(ids.begin(), ids.end(), c.id) - ids.begin();
              r.error(child(child("/channels", static_cast<std::size_t>(pos)), "spectrum"),
                      "task '" + task.name + "' needs a spectrum for channel '" + c.id + "'");
            }
          }
        }
        cfg.tasks.push_back(std::move(task));
      }
    }
  }

  if (const Json* q = r.member(doc, "quadrature", "", false)) {
    if (r.object(*q, "/quadrature", {"zero_frequency_node", "asymptotic_tail"})) {
      if (auto v = r.boolean(*q, "zero_frequency_node", "/quadrature")) {
        cfg.quadrature.zero_frequency_node = *v;
      }
      if (auto v = r.boolean(*q, "asymptotic_tail", "/quadrature")) {
        cfg.quadrature.asymptotic_tail = *v;
      }
    }
  }
  if (const Json* m = r.member(doc, "montecarlo", "", false)) {
    const std::string p = "/montecarlo";
    if (r.object(*m, p, {"dt", "trajectories", "window_factor", "substeps"})) {
      if (auto v = r.number(*m, "dt", p, false, false, true)) cfg.montecarlo.dt = *v;
      if (auto v = r.integer(*m, "trajectories", p, false, 2, 100000000)) {
        cfg.montecarlo.trajectories = static_cast<std::size_t>(*v);
      }
      if (auto v = r.integer(*m, "window_factor", p, false, 1, 4096)) {
        cfg.montecarlo.window_factor = static_cast<int>(*v);
      }
      if (auto v = r.integer(*m, "substeps", p, false, 1, 100000000)) {
        cfg.montecarlo.substeps = static_cast<int>(*v);
      }
    }
  }
  if (const Json* s = r.member(doc, "seed", "", false)) {
    if (!s->is_number_unsigned()) {
      r.error("/seed", "expected a non-negative integer");
    } else {
      cfg.seed = s->get<std::uint64_t>();
    }
  }
  if (auto o = r.string(doc, "output_dir", "", false)) cfg.output_dir = *o;
  if (auto w = r.number(doc, "white_band_limit", "", false, true)) cfg.white_band_limit = *w;

  if (result.violations.empty()) result.config = std::move(cfg);
  return result;
}

ParseResult load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.violations.push_back({"", "cannot read config file '" + path.string() + "'"});
    return r;
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    ParseResult r;
    r.violations.push_back({"", std::string("invalid JSON: ") + e.what()});
    return r;
  }
  return parse_config(doc, path.parent_path());
}

Json matrix_to_json(const Matrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ri.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Json sequence_to_json(const PulseSequence& seq) {
  int qubits = 0;
  while ((Index{1} << qubits) < seq.dim()) ++qubits;
  Json items = Json::array();
  for (const auto& gate : seq.gates()) {
    for (std::size_t i = gate.begin; i < gate.end; ++i) {
      const auto& item = seq.items()[i];
      Json j;
      j["gate"] = gate.label;
      if (const auto* s = std::get_if<Segment>(&item)) {
        j["duration"] = s->duration;
        j["hamiltonian"] = matrix_to_json(s->hamiltonian);
        Json noise = Json::object();
        for (std::size_t a = 0; a < seq.channels().size(); ++a) {
          noise[seq.channels()[a]] = matrix_to_json(s->noise[a]);
        }
        j["noise"] = std::move(noise);
      } else {
        j["unitary"] = matrix_to_json(std::get<InstantaneousGate>(item).unitary);
      }
      items.push_back(std::move(j));
    }
  }
  return Json{{"builder", "inline"}, {"qubits", qubits}, {"items", std::move(items)}};
}

Json circuit_to_json(const CircuitSpec& spec, const std::vector<NoiseSpec>& noise) {
  Json gates = Json::array();
  for (const auto& g : spec.gates) {
    Json j{{"kind", kind_name(g.kind)}, {"qubits", g.qubits}};
    if (g.angle != 0.0) j["angle"] = g.angle;
    if (!g.label.empty()) j["label"] = g.label;
    if (g.duration > 0.0) j["duration"] = g.duration;
    gates.push_back(std::move(j));
  }
  Json echoes = Json::array();
  for (const auto& e : spec.echoes) echoes.push_back(Json{{"qubit", e.qubit}, {"time", e.time}});
  Json n = Json::array();
  for (const auto& s : noise) n.push_back(Json{{"channel", s.channel}, {"operator", matrix_to_json(s.op)}});
  return Json{{"builder", "circuit"},
              {"qubits", spec.qubits},
              {"timing",
               {{"single_qubit", spec.timing.single_qubit},
                {"two_qubit", spec.timing.two_qubit},
                {"echo_pulse", spec.timing.echo_pulse}}},
              {"gates", std::move(gates)},
              {"echoes", std::move(echoes)},
              {"noise", std::move(n)}};
}

Json emit_config(const Json& sequence, const std::vector<std::string>& channels) {
  Json cs = Json::array();
  for (const auto& id : channels) {
    cs.push_back(Json{{"id", id}, {"spectrum", {{"type", "white"}, {"psd", 1e-3}}}});
  }
  return Json{{"schema_version", kSchemaVersion},
              {"sequence", sequence},
              {"channels", std::move(cs)},
              {"grid", {{"type", "default"}}},
              {"tasks", Json::array({"fidelity_ff"})},
              {"seed", 0},
              {"output_dir", "ffcorr-output"}};
}

}  // namespace ffcorr::cli
