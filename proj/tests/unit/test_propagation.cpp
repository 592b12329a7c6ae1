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
#include <random>

#include "ffcorr/circuits.hpp"
#include "ffcorr/errors.hpp"
#include "ffcorr/propagation.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {
constexpr double kPi = std::numbers::pi;
const Complex kI(0.0, 1.0);
}  // namespace

TEST_CASE("segment propagators of simple Hamiltonians", "[propagation]") {
  const Matrix x = testing::pauli('X');
  const Segment idle{0.7, Matrix::Zero(2, 2), {}};
  CHECK((segment_propagator(idle) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  const Segment rot{1.0, 0.5 * kPi * x, {}};
  CHECK((segment_propagator(rot) + kI * x).cwiseAbs().maxCoeff() < 1e-15);
  const Matrix big = Matrix::Zero(4, 4);
  CHECK((expm_hermitian(big, 3.0) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("exponentials agree with a Pade reference", "[propagation]") {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    const auto b = OperatorBasis::pauli(n);
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix h = testing::random_hermitian(b, rng, 2.0, rep % 2 == 0);
      const double t = 0.1 + 0.3 * rep;
      const Matrix u = expm_hermitian(h, t);
      CHECK((u - testing::expm_reference(h, t)).cwiseAbs().maxCoeff() < 1e-11);
      CHECK(unitarity_error(u) < 1e-12);
    }
  }
}

TEST_CASE("eigendecomposition reconstructs the operator", "[propagation]") {
  std::mt19937_64 rng(5);
  const auto b = OperatorBasis::pauli(3);
  const Matrix h = testing::random_hermitian(b, rng);
  const Eigensystem e = diagonalize(h);
  const Matrix r = e.vectors * e.energies.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  CHECK((r - h).cwiseAbs().maxCoeff() < 1e-12);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(bad), NumericalError);
}

TEST_CASE("cumulative propagators of idles and the spin echo", "[propagation]") {
  const Matrix z = testing::pauli('Z');
  const PulseSequence idles(2, {"z"},
                            {Segment{1.0, Matrix::Zero(2, 2), {z}},
                             Segment{2.0, Matrix::Zero(2, 2), {z}}},
                            {GateSpan{"a", 0, 1}, GateSpan{"b", 1, 2}});
  const PropagatorSet pi(idles);
  for (std::size_t g = 0; g < 2; ++g) CHECK(pi.gate_frame(g).isApprox(Matrix::Identity(2, 2)));
  CHECK(pi.total().isApprox(Matrix::Identity(2, 2)));

  const auto echo = spin_echo_sequence(0.5, PiPulse{}, NoiseSpec{"z", z});
  const PropagatorSet p(echo);
  const Matrix minus_ix = -kI * testing::pauli('X');
  CHECK((p.after(0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.after(1) - minus_ix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.after(2) - minus_ix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.gate_frame(2) - minus_ix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.boundary_times() == std::vector<double>{0.0, 0.5, 0.5, 1.0});
  // The pi pulse at t = 0.5 acts only after that instant.
  CHECK((p.at(0.5) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((p.at(0.75) - minus_ix).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.segment_at(0.5) == 0);
  CHECK(p.segment_at(0.51) == 2);
  CHECK_THROWS_AS(p.at(1.5), RangeError);
  CHECK_THROWS_AS(p.at(-0.1), RangeError);
}

TEST_CASE("propagation at arbitrary times matches the reference", "[propagation]") {
  std::mt19937_64 rng(8);
  const auto b = OperatorBasis::pauli(2);
  testing::RandomSequenceOptions opt;
  opt.instantaneous = 0.5;
  const auto seq = testing::random_sequence(b, rng, opt);
  const PropagatorSet p(seq);
  const double tau = seq.total_duration();
  for (int i = 0; i <= 20; ++i) {
    const double t = tau * i / 20.0;
    CHECK((p.at(t) - testing::control_unitary_reference(seq, t)).cwiseAbs().maxCoeff() < 1e-10);
  }
  for (std::size_t i = 0; i < p.item_count(); ++i) {
    CHECK((p.after(i) - p.propagator(i) * p.before(i)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(unitarity_error(p.total()) < 1e-12);
}
