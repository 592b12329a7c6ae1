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
#include "ffcorr/filter_functions.hpp"
#include "oracles.hpp"

using namespace ffcorr;

namespace {

std::shared_ptr<const FrequencyGrid> grid_ptr(FrequencyGrid g) {
  return std::make_shared<const FrequencyGrid>(std::move(g));
}

double rel(Complex got, Complex ref) { return std::abs(got - ref) / std::abs(ref); }

}  // namespace

TEST_CASE("generalized filter function structure", "[ff]") {
  const auto b = OperatorBasis::pauli(1);
  const auto fid = fid_sequence(1.0, NoiseSpec{"z", testing::pauli('Z')});
  const auto grid = FrequencyGrid::logarithmic(1e-2, 1e2, 20);
  const auto cm = control_matrix_freq(fid, b, grid);
  const auto gff = generalized_ff(cm);
  const RealMatrix diag = gff.diagonal(0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Matrix f = gff.at(0, i);
    CHECK((f - f.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(f(3, 3).real() - diag(3, static_cast<Index>(i))) < 1e-15 * diag(3, static_cast<Index>(i)));
    Matrix rest = f;
    rest(3, 3) = 0.0;
    CHECK(rest.cwiseAbs().maxCoeff() == 0.0);
  }
  std::mt19937_64 rng(2);
  const auto b2 = OperatorBasis::pauli(2);
  const auto seq = testing::random_sequence(b2, rng);
  const auto g2 = generalized_ff(control_matrix_freq(seq, b2, grid));
  for (std::size_t i = 0; i < grid.size(); i += 7) {
    const Matrix f = g2.at(0, i);
    CHECK((f - f.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f.diagonal().real().minCoeff() >= 0.0);
  }
}

TEST_CASE("fidelity filter functions of idle and echo", "[ff]") {
  const auto b = OperatorBasis::pauli(1);
  const Matrix z = testing::pauli('Z');
  const double tau = 0.9;
  const auto grid = FrequencyGrid::logarithmic(1e-3, 1e2, 200);
  const auto idle = fidelity_ff(control_matrix_freq(fid_sequence(tau, NoiseSpec{"z", z}), b, grid));
  const auto echo = fidelity_ff(control_matrix_freq(spin_echo_sequence(tau, PiPulse{}, NoiseSpec{"z", z}), b, grid));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = grid[i];
    const double s = std::sin(0.5 * w * tau);
    CHECK(std::abs(idle.values(0, static_cast<Index>(i)) / (8.0 * s * s / (w * w)) - 1.0) < 1e-10);
    CHECK(std::abs(echo.values(0, static_cast<Index>(i)) / (32.0 * s * s * s * s / (w * w)) - 1.0) < 1e-8);
  }
  const auto none = fidelity_ff(control_matrix_freq(fid_sequence(tau, NoiseSpec{"z", Matrix::Zero(2, 2)}), b, grid));
  CHECK(none.values.cwiseAbs().maxCoeff() == 0.0);
  // Doubling the duration quadruples the DC limit.
  const auto lo = FrequencyGrid::from_values({1e-6, 1e-5});
  const double f1 = fidelity_ff(control_matrix_freq(fid_sequence(1.0, NoiseSpec{"z", z}), b, lo)).values(0, 0);
  const double f2 = fidelity_ff(control_matrix_freq(fid_sequence(2.0, NoiseSpec{"z", z}), b, lo)).values(0, 0);
  CHECK(std::abs(f2 / f1 - 4.0) < 1e-9);
}

TEST_CASE("correlation filter functions of the spin echo", "[ff]") {
  const auto b = OperatorBasis::pauli(1);
  const double tau = 1.0;
  const auto echo = spin_echo_sequence(tau, PiPulse{}, NoiseSpec{"z", testing::pauli('Z')});
  const auto grid = grid_ptr(FrequencyGrid::logarithmic(1e-3, 1e2, 120));
  const auto parts = gate_control_matrices(echo, b, grid);
  const auto cff = correlation_ff(parts, b);
  const auto streamed = correlation_ff(echo, b, grid);
  REQUIRE(cff.gate_count() == 3);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double w = (*grid)[i];
    const double s = std::sin(0.5 * w * tau);
    const Complex ref = -8.0 * std::polar(1.0, w * tau) * s * s / (w * w);
    CHECK(rel(cff.at(0, 0, 2, i), ref) < 1e-9);
    CHECK(rel(streamed.at(0, 0, 2, i), ref) < 1e-9);
    CHECK(cff.at(0, 2, 0, i) == std::conj(cff.at(0, 0, 2, i)));
    // The instantaneous pi gate carries no noise.
    CHECK(std::abs(cff.at(0, 1, 1, i)) == 0.0);
  }
  CHECK(cff.labels() == std::vector<std::string>{"idle1", "pi", "idle2"});
}

TEST_CASE("correlation filter functions decompose the total", "[ff]") {
  std::mt19937_64 rng(31);
  const auto grid = grid_ptr(FrequencyGrid::logarithmic(1e-3, 1e3, 80));
  for (int n = 1; n <= 2; ++n) {
    const auto b = OperatorBasis::pauli(n);
    for (int rep = 0; rep < 3; ++rep) {
      testing::RandomSequenceOptions opt;
      opt.instantaneous = 0.3;
      opt.channels = 2;
      const auto seq = testing::random_sequence(b, rng, opt);
      const auto parts = gate_control_matrices(seq, b, grid);
      const auto cff = correlation_ff(parts, b);
      const auto streamed = correlation_ff(seq, b, grid);
      const auto total = fidelity_ff(control_matrix_freq(seq, b, grid));
      for (std::size_t a = 0; a < 2; ++a) {
        const RealVector sum = cff.total(a);
        const RealVector ref = total.values.row(static_cast<Index>(a)).transpose();
        CHECK(((sum - ref).cwiseAbs().array() <= 1e-9 * ref.cwiseAbs().array() + 1e-14).all());
        CHECK(testing::max_relative(cff.values(a), streamed.values(a)) < 1e-10);
        CHECK(testing::max_relative(cff.zero_frequency(a), streamed.zero_frequency(a)) < 1e-10);
        CHECK(testing::max_relative(cff.tail_weights(a), streamed.tail_weights(a)) < 1e-10);
        for (std::size_t i = 0; i < grid->size(); i += 9) {
          const Matrix m = cff.at(a, i);
          CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff());
        }
        // Diagonal entries are the gates' own fidelity filter functions.
        for (std::size_t g = 0; g < seq.gate_count(); ++g) {
          const auto& c = parts[g].control;
          if (c.duration() == 0.0) continue;
          const RealVector own = c.values(a).cwiseAbs2().colwise().sum().transpose();
          for (std::size_t i = 0; i < grid->size(); i += 11) {
            CHECK(std::abs(cff.at(a, g, g, i).real() - own(static_cast<Index>(i))) <=
                  1e-9 * own(static_cast<Index>(i)) + 1e-15);
          }
        }
      }
    }
  }
}

TEST_CASE("single gate correlation equals its fidelity filter function", "[ff]") {
  const auto b = OperatorBasis::pauli(1);
  const auto fid = fid_sequence(0.6, NoiseSpec{"z", testing::pauli('Y')});
  const auto grid = grid_ptr(FrequencyGrid::logarithmic(1e-2, 1e2, 30));
  const auto cff = correlation_ff(fid, b, grid);
  const auto f = fidelity_ff(control_matrix_freq(fid, b, grid));
  CHECK((cff.total(0).transpose() - f.values.row(0)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("jump clustering", "[ff]") {
  RealVector a(2), c(2);
  a << 1.0, 0.0;
  c << 0.0, 2.0;
  const std::vector<std::vector<Jump>> sources{{Jump{0.0, a}, Jump{1.0, -a}},
                                               {Jump{1.0 + 1e-9, c}, Jump{3.0, -c}}};
  const auto clusters = cluster_jumps(sources, 2, 1e-6);
  REQUIRE(clusters.size() == 3);
  CHECK(clusters[1].by_source[0](0) == -1.0);
  CHECK(clusters[1].by_source[1](1) == 2.0);
  CHECK(clusters[2].time == 3.0);
}
