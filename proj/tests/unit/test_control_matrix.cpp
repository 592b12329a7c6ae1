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
#include "ffcorr/control_matrix.hpp"
#include "ffcorr/errors.hpp"
#include "oracles.hpp"

using namespace ffcorr;
using Catch::Matchers::WithinAbs;

namespace {

const Complex kI(0.0, 1.0);
const double kSqrt2 = std::sqrt(2.0);

std::shared_ptr<const FrequencyGrid> grid_ptr(FrequencyGrid g) {
  return std::make_shared<const FrequencyGrid>(std::move(g));
}

}  // namespace

TEST_CASE("time-domain control matrix of idle and echo", "[control]") {
  const auto b = OperatorBasis::pauli(1);
  const Matrix z = testing::pauli('Z');
  const auto fid = fid_sequence(1.0, NoiseSpec{"z", z});
  for (double t : {0.0, 0.3, 1.0}) {
    const RealMatrix c = control_matrix_time(fid, b, t);
    CHECK_THAT(c(0, 3), WithinAbs(kSqrt2, 1e-15));
    CHECK(c.row(0).head(3).norm() < 1e-15);
  }
  CHECK_THROWS_AS(control_matrix_time(fid, b, 1.5), RangeError);

  std::mt19937_64 rng(1);
  const auto seq = testing::random_sequence(OperatorBasis::pauli(2), rng);
  const RealMatrix c0 = control_matrix_time(seq, OperatorBasis::pauli(2), 0.0);
  const auto& first = std::get<Segment>(seq.items()[0]);
  CHECK((c0.row(0).transpose() - OperatorBasis::pauli(2).expand(first.noise[0])).norm() < 1e-14);

  const auto echo = spin_echo_sequence(0.5, PiPulse{}, NoiseSpec{"z", z});
  CHECK_THAT(control_matrix_time(echo, b, 0.75)(0, 3), WithinAbs(-kSqrt2, 1e-14));
  CHECK_THAT(control_matrix_time(echo, b, 0.25)(0, 3), WithinAbs(kSqrt2, 1e-14));
}

TEST_CASE("frequency-domain control matrix of an idle", "[control]") {
  const auto b = OperatorBasis::pauli(1);
  const double tau = 1.3;
  const auto fid = fid_sequence(tau, NoiseSpec{"z", testing::pauli('Z')});
  const auto grid = FrequencyGrid::logarithmic(1e-6, 1e4, 300);
  const ControlMatrix cm = control_matrix_freq(fid, b, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const double x = w * tau;
    const double h = std::sin(0.5 * x);
    // e^{ix} - 1 without cancellation.
    const Complex ref = kSqrt2 * Complex(-2.0 * h * h, std::sin(x)) / (kI * w);
    const Complex got = cm.values(0)(3, static_cast<Index>(i));
    // Phases w tau near 1e4 carry ~1e-12 relative rounding.
    CHECK(std::abs(got - ref) <= 1e-11 * std::abs(ref));
    CHECK(std::abs(cm.values(0)(0, static_cast<Index>(i))) == 0.0);
    CHECK(cm.at_negative(0, 3, i) == std::conj(got));
  }
  CHECK(std::abs(cm.zero_frequency(0)(3) - kSqrt2 * tau) < 1e-15);
  REQUIRE(cm.jumps(0).size() == 2);
  CHECK(cm.jumps(0)[0].time == 0.0);
  CHECK_THAT(cm.jumps(0)[1].coefficients(3), WithinAbs(-kSqrt2, 1e-15));
}

TEST_CASE("closed-form control matrix agrees with numerical Fourier integrals", "[control]") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 2; ++n) {
    const auto b = OperatorBasis::pauli(n);
    for (int rep = 0; rep < 3; ++rep) {
      testing::RandomSequenceOptions opt;
      opt.channels = 2;
      opt.gates_max = 3;
      opt.instantaneous = 0.5;
      const auto seq = testing::random_sequence(b, rng, opt);
      const auto grid = FrequencyGrid::from_values({1e-3, 0.7, 3.1, 12.0, 40.0});
      const ControlMatrix cm = control_matrix_freq(seq, b, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const Matrix ref = testing::control_matrix_freq_reference(seq, b, grid[i]);
        Matrix got(2, b.size());
        for (std::size_t a = 0; a < 2; ++a) {
          got.row(static_cast<Index>(a)) = cm.values(a).col(static_cast<Index>(i)).transpose();
        }
        CHECK(testing::max_relative(got, ref) < 1e-9);
      }
      const Matrix ref0 = testing::control_matrix_freq_reference(seq, b, 0.0);
      for (std::size_t a = 0; a < 2; ++a) {
        CHECK((cm.zero_frequency(a).transpose() - ref0.row(static_cast<Index>(a))).cwiseAbs().maxCoeff() <
              1e-9 * ref0.cwiseAbs().maxCoeff());
        CHECK(cm.zero_frequency(a).imag().cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }
}

TEST_CASE("low-frequency limit and high-frequency asymptotics", "[control]") {
  std::mt19937_64 rng(4);
  const auto b = OperatorBasis::pauli(1);
  const auto seq = testing::random_sequence(b, rng);
  const auto grid = FrequencyGrid::from_values({1e-7, 2e-7, 1e5});
  const ControlMatrix cm = control_matrix_freq(seq, b, grid);
  const Vector& zero = cm.zero_frequency(0);
  const Vector lo1 = cm.values(0).col(0), lo2 = cm.values(0).col(1);
  CHECK((lo1 - zero).cwiseAbs().maxCoeff() < 1e-6 * zero.cwiseAbs().maxCoeff());
  // Imaginary part vanishes linearly in w.
  const double r = lo2.imag().norm() / lo1.imag().norm();
  CHECK_THAT(r, WithinAbs(2.0, 1e-5));

  // B(w) ~ (i / w) sum_c J_c e^{i w t_c}.
  const double w = grid[2];
  Vector asym = Vector::Zero(b.size());
  for (const Jump& j : cm.jumps(0)) asym += (kI / w) * std::polar(1.0, w * j.time) * j.coefficients.cast<Complex>();
  const Vector high = cm.values(0).col(2);
  CHECK((high - asym).norm() < 1e-2 * asym.norm());
}

TEST_CASE("results do not depend on the worker count", "[control]") {
  std::mt19937_64 rng(9);
  const auto b = OperatorBasis::pauli(2);
  const auto seq = testing::random_sequence(b, rng);
  const auto grid = FrequencyGrid::default_for(seq.total_duration());
  const ControlMatrix one = control_matrix_freq(seq, b, grid, ComputeOptions{1});
  const ControlMatrix four = control_matrix_freq(seq, b, grid, ComputeOptions{4});
  CHECK((one.values(0).array() == four.values(0).array()).all());
}

TEST_CASE("concatenation of per-gate control matrices", "[control]") {
  const auto b = OperatorBasis::pauli(1);
  const Matrix z = testing::pauli('Z');
  const double tau = 0.8;
  const auto grid = grid_ptr(FrequencyGrid::logarithmic(1e-3, 1e3, 50));

  SECTION("single part is unchanged") {
    const auto fid = fid_sequence(tau, NoiseSpec{"z", z});
    const auto parts = gate_control_matrices(fid, b, grid);
    const ControlMatrix whole = concatenate_control_matrices(parts, b);
    CHECK((whole.values(0) - parts[0].control.values(0)).cwiseAbs().maxCoeff() < 1e-15);
  }
  SECTION("two idles equal one idle of twice the length") {
    const PulseSequence two(2, {"z"},
                            {Segment{tau, Matrix::Zero(2, 2), {z}}, Segment{tau, Matrix::Zero(2, 2), {z}}},
                            {GateSpan{"a", 0, 1}, GateSpan{"b", 1, 2}});
    const auto parts = gate_control_matrices(two, b, grid);
    const ControlMatrix joined = concatenate_control_matrices(parts, b);
    const ControlMatrix single = control_matrix_freq(fid_sequence(tau, NoiseSpec{"z", z}), b, grid);
    const ControlMatrix doubled = control_matrix_freq(fid_sequence(2 * tau, NoiseSpec{"z", z}), b, grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const Complex f = 1.0 + std::polar(1.0, (*grid)[i] * tau);
      const Complex ref = f * single.values(0)(3, static_cast<Index>(i));
      CHECK(std::abs(joined.values(0)(3, static_cast<Index>(i)) - ref) < 1e-12 * (1 + std::abs(ref)));
    }
    CHECK(testing::max_relative(joined.values(0), doubled.values(0)) < 1e-12);
  }
  SECTION("spin echo and random sequences match the whole-sequence computation") {
    const auto echo = spin_echo_sequence(tau, PiPulse{}, NoiseSpec{"z", z});
    const auto parts = gate_control_matrices(echo, b, grid);
    CHECK(testing::max_relative(concatenate_control_matrices(parts, b).values(0),
                                control_matrix_freq(echo, b, grid).values(0)) < 1e-9);
    std::mt19937_64 rng(17);
    const auto b2 = OperatorBasis::pauli(2);
    for (int rep = 0; rep < 4; ++rep) {
      testing::RandomSequenceOptions opt;
      opt.instantaneous = 0.4;
      opt.channels = 2;
      const auto seq = testing::random_sequence(b2, rng, opt);
      const auto ps = gate_control_matrices(seq, b2, grid);
      const ControlMatrix joined = concatenate_control_matrices(ps, b2);
      const ControlMatrix direct = control_matrix_freq(seq, b2, grid);
      for (std::size_t a = 0; a < 2; ++a) {
        CHECK(testing::max_relative(joined.values(a), direct.values(a)) < 1e-9);
        CHECK((joined.zero_frequency(a) - direct.zero_frequency(a)).cwiseAbs().maxCoeff() < 1e-9);
      }
      CHECK((joined.total_propagator() - direct.total_propagator()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("inconsistent frames, offsets and grids are rejected") {
    const auto echo = spin_echo_sequence(tau, PiPulse{}, NoiseSpec{"z", z});
    auto parts = gate_control_matrices(echo, b, grid);
    auto bad_frame = parts;
    bad_frame[2].frame = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(concatenate_control_matrices(bad_frame, b), ValidationError);
    auto bad_offset = parts;
    bad_offset[2].offset += 0.1;
    CHECK_THROWS_AS(concatenate_control_matrices(bad_offset, b), ValidationError);
    auto bad_grid = parts;
    bad_grid[1].control = ControlMatrix({"z"}, grid_ptr(FrequencyGrid::linear(1.0, 2.0, 3)), 0.0, 4,
                                        parts[1].control.total_propagator());
    CHECK_THROWS_AS(concatenate_control_matrices(bad_grid, b), ValidationError);
  }
}

TEST_CASE("frame transfer matrices", "[control]") {
  const auto b = OperatorBasis::pauli(1);
  const Matrix q = -kI * testing::pauli('X');
  const RealMatrix r = frame_transfer(q, b);
  CHECK_THAT(r(3, 3), WithinAbs(-1.0, 1e-15));
  CHECK_THAT(r(1, 1), WithinAbs(1.0, 1e-15));
  CHECK_THAT(r(2, 2), WithinAbs(-1.0, 1e-15));
}
