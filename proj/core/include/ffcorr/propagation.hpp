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

#include <optional>
#include <vector>

#include "ffcorr/pulse.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

/// H = V diag(energies) V^dagger.
struct Eigensystem {
  RealVector energies;
  Matrix vectors;
};

/// Hermitian eigendecomposition. Throws NumericalError carrying the
/// reconstruction residual if the solver fails or the residual exceeds 1e-10
/// relative to the operator norm.
Eigensystem diagonalize(const Matrix& hermitian);

/// exp(-i H t) from an eigensystem of H.
Matrix propagator(const Eigensystem& eig, double t);

/// exp(-i H t) for Hermitian H. Uses the closed-form SU(2) expression for
/// 2 x 2 inputs and an eigendecomposition otherwise.
Matrix expm_hermitian(const Matrix& hamiltonian, double t);

Matrix segment_propagator(const Segment& segment);

/// Per-item propagators P_i and the cumulative products after each item.
///
/// Invariant: after(i) = propagator(i) * before(i) exactly, with before(0) = 1.
class PropagatorSet {
 public:
  explicit PropagatorSet(const PulseSequence& seq);

  std::size_t item_count() const { return propagators_.size(); }
  const Matrix& propagator(std::size_t item) const { return propagators_[item]; }
  /// Cumulative propagator before item i is applied.
  const Matrix& before(std::size_t item) const { return cumulative_[item]; }
  /// Cumulative propagator after item i is applied.
  const Matrix& after(std::size_t item) const { return cumulative_[item + 1]; }
  /// Eigensystem of a segment's Hamiltonian; empty for instantaneous gates.
  const std::optional<Eigensystem>& eigensystem(std::size_t item) const {
    return eigensystems_[item];
  }
  double start_time(std::size_t item) const { return start_times_[item]; }

  /// Q_{g-1}: cumulative propagator at the start of gate g.
  const Matrix& gate_frame(std::size_t g) const { return gate_frames_[g]; }
  /// t_0 .. t_G.
  const std::vector<double>& boundary_times() const { return boundary_times_; }

  /// Full control operation Q = Q_G.
  const Matrix& total() const { return cumulative_.back(); }

  /// U_c(t) for 0 <= t <= tau. A time on an item boundary resolves to the
  /// earliest segment containing it, so U_c(0) = 1 and instantaneous gates at
  /// t take effect only for later times.
  Matrix at(double t) const;

  /// Index of the segment whose control and noise apply at time t, with the
  /// same boundary rule as at(). Throws RangeError outside [0, tau].
  std::size_t segment_at(double t) const;

 private:
  std::vector<Matrix> propagators_;
  std::vector<Matrix> cumulative_;
  std::vector<std::optional<Eigensystem>> eigensystems_;
  std::vector<double> start_times_;
  std::vector<double> durations_;
  std::vector<Matrix> gate_frames_;
  std::vector<double> boundary_times_;
};

inline PropagatorSet cumulative_propagators(const PulseSequence& seq) {
  return PropagatorSet(seq);
}

}  // namespace ffcorr
