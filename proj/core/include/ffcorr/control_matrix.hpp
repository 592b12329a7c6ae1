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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ffcorr/basis.hpp"
#include "ffcorr/propagation.hpp"
#include "ffcorr/pulse.hpp"
#include "ffcorr/spectra.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

/// Discontinuity of the time-domain control matrix: coefficients jump by
/// \p coefficients at \p time. The jumps fix the 1/w asymptotics of the
/// frequency-domain control matrix.
struct Jump {
  double time = 0.0;
  RealVector coefficients;
};

/// Frequency-domain control matrix B_{alpha k}(w) = int_0^tau dt B_{alpha k}(t)
/// e^{i w t} on a grid of positive frequencies, plus the w = 0 column and
/// the jump data used by the quadrature.
class ControlMatrix {
 public:
  ControlMatrix(std::vector<std::string> channels, std::shared_ptr<const FrequencyGrid> grid,
                double duration, Index basis_size, Matrix total_propagator);

  const std::vector<std::string>& channels() const { return channels_; }
  std::size_t channel_count() const { return channels_.size(); }
  const FrequencyGrid& grid() const { return *grid_; }
  const std::shared_ptr<const FrequencyGrid>& grid_ptr() const { return grid_; }
  double duration() const { return duration_; }
  Index basis_size() const { return basis_size_; }
  /// Control operation of the sequence this matrix was computed from.
  const Matrix& total_propagator() const { return total_propagator_; }

  /// basis_size x grid size; column i holds B_{alpha k}(w_i).
  const Matrix& values(std::size_t channel) const { return values_[channel]; }
  Matrix& values(std::size_t channel) { return values_[channel]; }

  /// B_{alpha k}(0) = int_0^tau B_{alpha k}(t) dt (imaginary part zero up to
  /// rounding).
  const Vector& zero_frequency(std::size_t channel) const { return zero_[channel]; }
  Vector& zero_frequency(std::size_t channel) { return zero_[channel]; }

  const std::vector<Jump>& jumps(std::size_t channel) const { return jumps_[channel]; }
  std::vector<Jump>& jumps(std::size_t channel) { return jumps_[channel]; }

  /// B_{alpha k}(-w_i) = conj(B_{alpha k}(w_i)) since B(t) is real.
  Complex at_negative(std::size_t channel, Index k, std::size_t i) const {
    return std::conj(values_[channel](k, static_cast<Index>(i)));
  }

 private:
  std::vector<std::string> channels_;
  std::shared_ptr<const FrequencyGrid> grid_;
  double duration_;
  Index basis_size_;
  Matrix total_propagator_;
  std::vector<Matrix> values_;
  std::vector<Vector> zero_;
  std::vector<std::vector<Jump>> jumps_;
};

/// Real (channel x basis) matrix B_{alpha k}(t) = tr(U_c^dagger(t) B_alpha
/// U_c(t) sigma_k). Throws RangeError for t outside [0, tau].
RealMatrix control_matrix_time(const PulseSequence& seq, const PropagatorSet& props,
                               const OperatorBasis& basis, double t);
RealMatrix control_matrix_time(const PulseSequence& seq, const OperatorBasis& basis, double t);

struct ComputeOptions {
  /// 0 selects default_thread_count().
  unsigned threads = 0;
};

/// Closed-form per-segment Fourier integrals. With H_c = V D V^dagger on a
/// segment starting at t_s, the segment contributes
///   e^{i w t_s} tr(Q^dagger V [(V^dagger B V) o K(w)] V^dagger Q sigma_k),
///   K_ij(w) = dt e^{i phi dt/2} sinc(phi dt/2),  phi = w + lambda_i - lambda_j,
/// where Q is the cumulative propagator before the segment.
ControlMatrix control_matrix_freq(const PulseSequence& seq, const OperatorBasis& basis,
                                  const FrequencyGrid& grid, ComputeOptions options = {});
ControlMatrix control_matrix_freq(const PulseSequence& seq, const OperatorBasis& basis,
                                  std::shared_ptr<const FrequencyGrid> grid,
                                  ComputeOptions options = {});

/// One gate's own control matrix (computed from t = 0 with identity frame)
/// together with its position in the enclosing sequence.
struct GatePart {
  std::string label;
  ControlMatrix control;
  /// Q_{g-1}, the cumulative propagator before the gate.
  Matrix frame;
  /// t_{g-1}.
  double offset = 0.0;
};

/// Control matrices of every gate of \p seq with their frames and offsets.
std::vector<GatePart> gate_control_matrices(const PulseSequence& seq, const OperatorBasis& basis,
                                            std::shared_ptr<const FrequencyGrid> grid,
                                            ComputeOptions options = {});

/// Coefficient-space action of X -> Q^dagger X Q: R_kl = tr(sigma_k Q^dagger
/// sigma_l Q).
RealMatrix frame_transfer(const Matrix& frame, const OperatorBasis& basis);

/// B(w) = sum_g e^{i w t_{g-1}} R_g B^(g)(w), with R_g = frame_transfer(Q_{g-1}).
/// Parts must share grid, channels and basis; offsets must follow the
/// durations and each frame must equal the product of the preceding gates'
/// propagators (ValidationError otherwise).
ControlMatrix concatenate_control_matrices(std::span<const GatePart> parts,
                                           const OperatorBasis& basis);

}  // namespace ffcorr
