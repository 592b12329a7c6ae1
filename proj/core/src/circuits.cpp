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
#include "ffcorr/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <tuple>

#include "ffcorr/basis.hpp"
#include "ffcorr/errors.hpp"
#include "ffcorr/propagation.hpp"

namespace ffcorr {

namespace {

Matrix pauli_x() {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  return x;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

PulseSequence fid_sequence(double tau, const NoiseSpec& noise) {
  const Index d = noise.op.rows();
  return PulseSequence(d, {noise.channel}, {Segment{tau, Matrix::Zero(d, d), {noise.op}}},
                       {GateSpan{"idle", 0, 1}});
}

PulseSequence spin_echo_sequence(double tau_idle, const PiPulse& pulse, const NoiseSpec& noise) {
  if (noise.op.rows() != 2) throw ValidationError("spin echo acts on a single qubit");
  const Matrix zero = Matrix::Zero(2, 2);
  std::vector<Item> items;
  items.emplace_back(Segment{tau_idle, zero, {noise.op}});
  if (pulse.mode == PiPulse::Mode::Instantaneous) {
    items.emplace_back(InstantaneousGate{Complex(0.0, -1.0) * pauli_x()});
  } else {
    if (!(pulse.duration > 0.0) ||
        std::abs(pulse.amplitude * pulse.duration - kPi) > 1e-9 * kPi) {
      std::ostringstream msg;
      msg << "finite pi pulse needs amplitude * duration = pi, got " << pulse.amplitude << " * "
          << pulse.duration;
      throw ValidationError(msg.str());
    }
    items.emplace_back(Segment{pulse.duration, 0.5 * pulse.amplitude * pauli_x(), {noise.op}});
  }
  items.emplace_back(Segment{tau_idle, zero, {noise.op}});
  return PulseSequence(2, {noise.channel}, std::move(items),
                       {GateSpan{"idle1", 0, 1}, GateSpan{"pi", 1, 2}, GateSpan{"idle2", 2, 3}});
}

Matrix embed_pauli(char label, int qubit, int qubits) {
  if (qubits < 1 || qubit < 0 || qubit >= qubits) {
    throw ValidationError("qubit index out of range");
  }
  std::string s(static_cast<std::size_t>(qubits), 'I');
  s[static_cast<std::size_t>(qubit)] = label;
  return PauliString(s).matrix();
}

namespace {

std::size_t arity(CircuitGate::Kind kind) {
  return kind == CircuitGate::Kind::CPhase || kind == CircuitGate::Kind::Swap ? 2 : 1;
}

std::string kind_name(CircuitGate::Kind kind) {
  switch (kind) {
    case CircuitGate::Kind::Hadamard: return "H";
    case CircuitGate::Kind::RotationX: return "RX";
    case CircuitGate::Kind::CPhase: return "CP";
    case CircuitGate::Kind::Swap: return "SW";
    case CircuitGate::Kind::Idle: return "ID";
  }
  return "?";
}

std::string gate_label(const CircuitGate& g, std::size_t index) {
  if (!g.label.empty()) return g.label;
  std::ostringstream s;
  s << "g" << index + 1 << "_" << kind_name(g.kind) << "_p";
  for (int q : g.qubits) s << q + 1;
  return s.str();
}

Matrix gate_hamiltonian(const CircuitGate& g, double slot, int qubits) {
  const Index d = Index{1} << qubits;
  const int a = g.qubits[0];
  switch (g.kind) {
    case CircuitGate::Kind::Hadamard:
      return (kPi / (2.0 * slot)) / std::numbers::sqrt2 *
             (embed_pauli('X', a, qubits) + embed_pauli('Z', a, qubits));
    case CircuitGate::Kind::RotationX:
      return (g.angle / (2.0 * slot)) * embed_pauli('X', a, qubits);
    case CircuitGate::Kind::CPhase: {
      const int b = g.qubits[1];
      const Matrix za = embed_pauli('Z', a, qubits);
      const Matrix zb = embed_pauli('Z', b, qubits);
      return -(g.angle / (4.0 * slot)) * (za * zb - za - zb);
    }
    case CircuitGate::Kind::Swap: {
      const int b = g.qubits[1];
      Matrix h = Matrix::Zero(d, d);
      for (char p : {'X', 'Y', 'Z'}) h += embed_pauli(p, a, qubits) * embed_pauli(p, b, qubits);
      return (kPi / (4.0 * slot)) * h;
    }
    case CircuitGate::Kind::Idle:
      return Matrix::Zero(d, d);
  }
  return Matrix::Zero(d, d);
}

}  // namespace

double CircuitSpec::slot_duration(const CircuitGate& gate) const {
  if (gate.duration > 0.0) return gate.duration;
  return arity(gate.kind) == 2 ? timing.two_qubit : timing.single_qubit;
}

void CircuitSpec::validate() const {
  if (qubits < 1 || qubits > kMaxQubits) {
    std::ostringstream msg;
    msg << "circuit supports 1.." << kMaxQubits << " qubits, got " << qubits;
    throw CapacityError(msg.str());
  }
  if (gates.empty()) throw ValidationError("circuit has no gates");
  if (!(timing.single_qubit > 0.0) || !(timing.two_qubit > 0.0) || timing.echo_pulse < 0.0) {
    throw ValidationError("timing model durations must be positive");
  }
  std::set<std::string> labels;
  std::vector<double> starts;
  double t = 0.0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const CircuitGate& g = gates[i];
    const std::string label = gate_label(g, i);
    if (g.qubits.size() != arity(g.kind)) {
      throw ValidationError("gate '" + label + "' has the wrong number of qubits");
    }
    for (int q : g.qubits) {
      if (q < 0 || q >= qubits) throw ValidationError("gate '" + label + "' acts outside the register");
    }
    if (arity(g.kind) == 2 && std::abs(g.qubits[0] - g.qubits[1]) != 1) {
      throw ValidationError("gate '" + label + "' does not act on nearest neighbours");
    }
    if (g.duration < 0.0 || !std::isfinite(g.duration) || !std::isfinite(g.angle)) {
      throw ValidationError("gate '" + label + "' has an invalid duration or angle");
    }
    if (!labels.insert(label).second) throw ValidationError("duplicate gate label '" + label + "'");
    starts.push_back(t);
    t += slot_duration(g);
  }
  const double total = t;
  const double half = 0.5 * timing.echo_pulse;
  const double tol = 1e-12 * std::max(1.0, total);
  std::vector<std::pair<double, double>> spans;
  for (const EchoPulse& e : echoes) {
    if (e.qubit < 0 || e.qubit >= qubits) throw ValidationError("echo pulse qubit out of range");
    if (e.time - half < -tol || e.time + half > total + tol) {
      throw ValidationError("echo pulse extends outside the circuit");
    }
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const auto& q = gates[i].qubits;
      if (std::find(q.begin(), q.end(), e.qubit) == q.end()) continue;
      const double a = starts[i], b = a + slot_duration(gates[i]);
      const bool overlaps = half > 0.0 ? (e.time + half > a + tol && e.time - half < b - tol)
                                       : (e.time > a + tol && e.time < b - tol);
      if (overlaps) {
        throw ValidationError("echo pulse on qubit " + std::to_string(e.qubit + 1) +
                              " overlaps gate '" + gate_label(gates[i], i) + "'");
      }
    }
    spans.emplace_back(e.time - half, e.time + half);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first < spans[i - 1].second - tol ||
        (half == 0.0 && std::abs(spans[i].first - spans[i - 1].first) <= tol)) {
      throw ValidationError("echo pulses overlap");
    }
  }
}

PulseSequence build_sequence(const CircuitSpec& spec, const std::vector<NoiseSpec>& noise) {
  spec.validate();
  const int n = spec.qubits;
  const Index d = Index{1} << n;
  std::vector<std::string> channels;
  std::vector<Matrix> ops;
  for (const auto& ns : noise) {
    if (ns.op.rows() != d || ns.op.cols() != d) {
      throw ValidationError("noise operator of channel '" + ns.channel +
                            "' does not match the register dimension");
    }
    channels.push_back(ns.channel);
    ops.push_back(ns.op);
  }
  const double echo = spec.timing.echo_pulse;
  const double half = 0.5 * echo;
  double total = 0.0;
  for (const auto& g : spec.gates) total += spec.slot_duration(g);
  const double tol = 1e-12 * std::max(1.0, total);

  std::vector<Item> items;
  std::vector<GateSpan> spans;
  double t0 = 0.0;
  for (std::size_t gi = 0; gi < spec.gates.size(); ++gi) {
    const CircuitGate& g = spec.gates[gi];
    const double slot = spec.slot_duration(g);
    const double t1 = t0 + slot;
    const bool last = gi + 1 == spec.gates.size();
    const Matrix hg = gate_hamiltonian(g, slot, n);
    const std::size_t begin = items.size();
    if (echo == 0.0) {
      // Instantaneous pulses at times in [t0, t1), or at t1 for the last slot.
      std::vector<const EchoPulse*> here;
      for (const auto& e : spec.echoes) {
        if (e.time >= t0 - tol && (e.time < t1 - tol || (last && e.time <= t1 + tol))) {
          here.push_back(&e);
        }
      }
      std::sort(here.begin(), here.end(),
                [](const EchoPulse* a, const EchoPulse* b) { return a->time < b->time; });
      double cursor = t0;
      for (const EchoPulse* e : here) {
        if (e->time - cursor > tol) items.emplace_back(Segment{e->time - cursor, hg, ops});
        items.emplace_back(
            InstantaneousGate{Complex(0.0, -1.0) * embed_pauli('X', e->qubit, n)});
        cursor = std::max(cursor, e->time);
      }
      if (t1 - cursor > tol) items.emplace_back(Segment{t1 - cursor, hg, ops});
    } else {
      std::vector<double> cuts{t0, t1};
      for (const auto& e : spec.echoes) {
        for (double c : {e.time - half, e.time + half}) {
          if (c > t0 + tol && c < t1 - tol) cuts.push_back(c);
        }
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        if (b - a <= tol) continue;
        const double mid = 0.5 * (a + b);
        Matrix h = hg;
        for (const auto& e : spec.echoes) {
          if (mid > e.time - half && mid < e.time + half) {
            h += 0.5 * (kPi / echo) * embed_pauli('X', e.qubit, n);
          }
        }
        items.emplace_back(Segment{b - a, h, ops});
      }
    }
    spans.push_back(GateSpan{gate_label(g, gi), begin, items.size()});
    t0 = t1;
  }
  return PulseSequence(d, std::move(channels), std::move(items), std::move(spans));
}

Matrix circuit_unitary(const CircuitSpec& spec) {
  return PropagatorSet(build_sequence(spec, {})).total();
}

CircuitSpec qft_circuit(int n, bool with_echo, const TimingModel& timing) {
  if (n < 2 || n > 5) throw CapacityError("QFT builder supports 2 to 5 qubits");
  if (with_echo && n < 3) throw ValidationError("QFT echo pulses need at least 3 qubits");
  // Pass j brings logical qubit j from the first position to position n - j,
  // interacting with every later qubit on the way. Passes are pipelined: an
  // operation at step i of pass j is scheduled at wave 2 j + i.
  struct Op {
    int wave;
    int pass;
    int step;
  };
  std::vector<Op> ops;
  for (int j = 0; j < n; ++j) {
    ops.push_back(Op{2 * j, j, 0});
    for (int i = 1; i <= n - 1 - j; ++i) ops.push_back(Op{2 * j + i, j, i});
  }
  std::stable_sort(ops.begin(), ops.end(), [](const Op& a, const Op& b) {
    return std::tie(a.wave, a.pass) < std::tie(b.wave, b.pass);
  });
  std::vector<int> logical(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) logical[static_cast<std::size_t>(p)] = p;

  CircuitSpec spec;
  spec.qubits = n;
  spec.timing = timing;
  auto add = [&](CircuitGate::Kind kind, std::vector<int> q, double angle) {
    CircuitGate g;
    g.kind = kind;
    g.qubits = std::move(q);
    g.angle = angle;
    spec.gates.push_back(g);
  };
  for (const Op& op : ops) {
    if (op.step == 0) {
      add(CircuitGate::Kind::Hadamard, {0}, 0.0);
      continue;
    }
    const int p = op.step - 1;
    const int a = logical[static_cast<std::size_t>(p)];
    const int b = logical[static_cast<std::size_t>(p + 1)];
    add(CircuitGate::Kind::CPhase, {p, p + 1}, kPi / std::pow(2.0, std::abs(b - a)));
    add(CircuitGate::Kind::Swap, {p, p + 1}, 0.0);
    std::swap(logical[static_cast<std::size_t>(p)], logical[static_cast<std::size_t>(p + 1)]);
  }
  if (with_echo) {
    const int q = n - 1;
    double t = 0.0, first = -1.0, last_end = 0.0;
    for (const auto& g : spec.gates) {
      const double slot = spec.slot_duration(g);
      if (std::find(g.qubits.begin(), g.qubits.end(), q) != g.qubits.end()) {
        if (first < 0.0) first = t;
        last_end = t + slot;
      }
      t += slot;
    }
    const double total = t;
    for (double x : {0.25 * first, 0.75 * first, last_end + 0.25 * (total - last_end),
                     last_end + 0.75 * (total - last_end)}) {
      spec.echoes.push_back(EchoPulse{q, x});
    }
  }
  spec.validate();
  return spec;
}

PulseSequence qft_sequence(int n, bool with_echo, const TimingModel& timing) {
  const CircuitSpec spec = qft_circuit(n, with_echo, timing);
  return build_sequence(spec, {NoiseSpec{"y" + std::to_string(n), embed_pauli('Y', n - 1, n)}});
}

Matrix qft_unitary(int n) {
  if (n < 1 || n > kMaxQubits) throw CapacityError("QFT size out of range");
  const Index d = Index{1} << n;
  Matrix u(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      const auto phase = static_cast<double>((j * k) % d);
      u(j, k) = std::polar(norm, 2.0 * kPi * phase / static_cast<double>(d));
    }
  }
  return u;
}

}  // namespace ffcorr
