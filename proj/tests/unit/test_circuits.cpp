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

#include <cmath>
#include <numbers>

#include "ffcorr/circuits.hpp"
#include "ffcorr/errors.hpp"
#include "ffcorr/filter_functions.hpp"
#include "ffcorr/propagation.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {

constexpr double kPi = std::numbers::pi;

// |tr(A^dagger B)| / d, equal to 1 iff A and B agree up to a global phase.
double overlap(const Matrix& a, const Matrix& b) {
  return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

}  // namespace

TEST_CASE("free induction decay builder", "[circuits]") {
  const auto fid = fid_sequence(1.0, NoiseSpec{"z", testing::pauli('Z')});
  CHECK(fid.gate_count() == 1);
  CHECK_THROWS_AS(fid_sequence(0.0, NoiseSpec{"z", testing::pauli('Z')}), ValidationError);
}

TEST_CASE("spin echo builder", "[circuits]") {
  const NoiseSpec z{"z", testing::pauli('Z')};
  CHECK_THROWS_AS(spin_echo_sequence(1.0, PiPulse{PiPulse::Mode::Finite, 0.1, 1.0}, z),
                  ValidationError);
  const auto b = OperatorBasis::pauli(1);
  const double tau = 1.0, dt = 1e-4;
  const auto inst = spin_echo_sequence(tau, PiPulse{}, z);
  const auto fin = spin_echo_sequence(tau, PiPulse{PiPulse::Mode::Finite, dt, kPi / dt}, z);
  CHECK(fin.gate_count() == 3);
  CHECK(std::abs(fin.total_duration() - (2 * tau + dt)) < 1e-15);
  // The deviation grows like w dt; stay at w dt <= 0.005.
  const auto grid = FrequencyGrid::logarithmic(1.0, 50.0, 40);
  const auto fi = fidelity_ff(control_matrix_freq(inst, b, grid));
  const auto ff = fidelity_ff(control_matrix_freq(fin, b, grid));
  for (Index i = 0; i < static_cast<Index>(grid.size()); ++i) {
    // Away from the nodes of sin^4(w tau / 2), where relative errors diverge.
    if (std::abs(std::sin(0.5 * grid[static_cast<std::size_t>(i)] * tau)) < 0.5) continue;
    CHECK(std::abs(ff.values(0, i) / fi.values(0, i) - 1.0) < 1e-2);
  }
  // Echo filter function vanishes faster than the FID one at low frequency.
  const auto lo = FrequencyGrid::from_values({1e-3, 2e-3});
  const auto e = fidelity_ff(control_matrix_freq(inst, b, lo));
  CHECK(std::abs(e.values(0, 1) / e.values(0, 0) - 4.0) < 1e-4);
}

TEST_CASE("QFT stand-in circuit", "[circuits]") {
  const auto spec = qft_circuit(4, false);
  CHECK(spec.gates.size() == 16);
  const auto seq = qft_sequence(4, false);
  CHECK(seq.gate_count() == 16);
  CHECK(seq.channels() == std::vector<std::string>{"y4"});
  CHECK(overlap(PropagatorSet(seq).total(), qft_unitary(4)) > 1.0 - 1e-9);

  const auto echo = qft_circuit(4, true);
  REQUIRE(echo.echoes.size() == 4);
  const std::vector<double> times{1.5, 4.5, 10.0, 14.0};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(echo.echoes[i].qubit == 3);
    CHECK(echo.echoes[i].time == times[i]);
  }
  const auto eseq = qft_sequence(4, true);
  CHECK(eseq.gate_count() == 16);
  CHECK(eseq.total_duration() == 16.0);
  CHECK(overlap(PropagatorSet(eseq).total(), qft_unitary(4)) > 1.0 - 1e-9);

  TimingModel finite;
  finite.echo_pulse = 0.2;
  const auto fseq = qft_sequence(4, true, finite);
  CHECK(fseq.gate_count() == 16);
  CHECK(overlap(PropagatorSet(fseq).total(), qft_unitary(4)) > 1.0 - 1e-9);

  for (int n : {2, 3, 5}) {
    CHECK(overlap(circuit_unitary(qft_circuit(n, false)), qft_unitary(n)) > 1.0 - 1e-9);
    CHECK(qft_circuit(n, false).gates.size() == static_cast<std::size_t>(n * n));
  }
  CHECK(overlap(circuit_unitary(qft_circuit(5, true)), qft_unitary(5)) > 1.0 - 1e-9);
  CHECK_THROWS_AS(qft_circuit(6, false), CapacityError);
  CHECK_THROWS_AS(qft_circuit(1, false), CapacityError);
  CHECK_THROWS_AS(qft_circuit(2, true), ValidationError);
}

TEST_CASE("circuit validation", "[circuits]") {
  CircuitSpec spec;
  spec.qubits = 3;
  spec.gates.push_back(CircuitGate{CircuitGate::Kind::CPhase, {0, 2}, 1.0, "", 0.0});
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.gates[0].qubits = {0, 1};
  spec.validate();
  spec.echoes.push_back(EchoPulse{1, 0.5});
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.echoes[0] = EchoPulse{2, 0.5};
  spec.validate();
  spec.echoes.push_back(EchoPulse{2, 0.5});
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.echoes.pop_back();
  spec.gates.push_back(CircuitGate{CircuitGate::Kind::Hadamard, {0}, 0.0, "g1_CP_p12", 0.0});
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.qubits = 9;
  CHECK_THROWS_AS(spec.validate(), CapacityError);
}

TEST_CASE("embedded Paulis", "[circuits]") {
  const Matrix z0 = embed_pauli('Z', 0, 2);
  CHECK(z0.isApprox(kron(testing::pauli('Z'), testing::pauli('I'))));
  CHECK_THROWS_AS(embed_pauli('Z', 2, 2), ValidationError);
}
