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

#include <string>
#include <vector>

#include "ffcorr/pulse.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

/// Noise operator of a single channel, e.g. {"z", Z}.
struct NoiseSpec {
  std::string channel;
  Matrix op;
};

/// Free induction decay: one idle segment of duration tau, one gate.
PulseSequence fid_sequence(double tau, const NoiseSpec& noise);

struct PiPulse {
  enum class Mode { Instantaneous, Finite };
  Mode mode = Mode::Instantaneous;
  /// Finite mode: segment length and Rabi amplitude of H = amplitude X / 2.
  /// A pi rotation needs amplitude * duration = pi.
  double duration = 0.0;
  double amplitude = 0.0;
};

/// idle(tau_idle), pi_x, idle(tau_idle) as three gates. The finite pi pulse
/// is a resonant constant drive realizing exp(-i pi X / 2); inconsistent
/// amplitude and duration raise ValidationError.
PulseSequence spin_echo_sequence(double tau_idle, const PiPulse& pulse, const NoiseSpec& noise);

/// Gate vocabulary of the circuit builder. Qubit 0 is the first (most
/// significant) qubit of the register; two-qubit gates act on neighbours.
struct CircuitGate {
  enum class Kind { Hadamard, RotationX, CPhase, Swap, Idle };
  Kind kind = Kind::Idle;
  std::vector<int> qubits;
  double angle = 0.0;
  std::string label;
  /// 0 selects the timing model's default for the gate's arity.
  double duration = 0.0;
};

/// Durations of the stand-in physical model.
struct TimingModel {
  double single_qubit = 1.0;
  double two_qubit = 1.0;
  /// Length of the echo pi_x pulses; 0 makes them instantaneous.
  double echo_pulse = 0.0;
};

/// pi_x pulse on \p qubit centred at absolute time \p time.
struct EchoPulse {
  int qubit = 0;
  double time = 0.0;
};

/// Sequential circuit on a linear chain. Every gate occupies one time slot
/// and becomes one gate of the pulse sequence.
///
/// Physical model: a single-qubit rotation is a constant resonant drive over
/// the slot, CPhase(phi) is a constant Ising coupling with local Z terms,
/// H = -(phi / 4 T)(Z Z - Z 1 - 1 Z), SWAP is a Heisenberg exchange
/// H = (pi / 4 T)(XX + YY + ZZ), and idle qubits evolve freely. Echo pulses
/// run concurrently with whatever slot they fall into.
struct CircuitSpec {
  int qubits = 1;
  std::vector<CircuitGate> gates;
  std::vector<EchoPulse> echoes;
  TimingModel timing;

  /// Checks nearest-neighbour connectivity, qubit ranges, unique labels and
  /// that echo pulses only overlap slots not acting on their qubit.
  void validate() const;
  double slot_duration(const CircuitGate& gate) const;
};

PulseSequence build_sequence(const CircuitSpec& spec, const std::vector<NoiseSpec>& noise);

/// Ideal unitary of the circuit (product of its gates, echoes included).
Matrix circuit_unitary(const CircuitSpec& spec);

/// Quantum Fourier transform on a linear chain using the nearest-neighbour
/// decomposition with interleaved swaps: n Hadamards, n(n-1)/2 controlled
/// phases and as many swaps, so 16 gates for n = 4. The swap network also
/// performs the final bit reversal. With \p with_echo, four pi_x pulses are
/// put on the last qubit at the quarter points of its idle windows before
/// its first and after its last gate (two before its controlled phase, two
/// after). Supports 2 <= n <= 5; echoes need n >= 3.
CircuitSpec qft_circuit(int n, bool with_echo, const TimingModel& timing = {});

/// qft_circuit + build_sequence with sigma_y noise on the last qubit
/// (channel "y<n>").
PulseSequence qft_sequence(int n, bool with_echo, const TimingModel& timing = {});

/// QFT matrix (1/sqrt N) exp(2 pi i j k / N) on n qubits.
Matrix qft_unitary(int n);

/// Single-qubit Pauli \p label (I, X, Y, Z) on \p qubit of an n-qubit register.
Matrix embed_pauli(char label, int qubit, int qubits);

}  // namespace ffcorr
