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

#include "ffcorr/control_matrix.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

/// Generalized filter function F_{alpha,kl}(w) = conj(B_{alpha k}(w)) B_{alpha l}(w),
/// evaluated lazily from a control matrix (the full array has
/// channels x d^4 x n_w entries).
class GeneralizedFilterFunction {
 public:
  explicit GeneralizedFilterFunction(std::shared_ptr<const ControlMatrix> control);

  const ControlMatrix& control() const { return *control_; }

  /// Hermitian d^2 x d^2 matrix at frequency index i.
  Matrix at(std::size_t channel, std::size_t i) const;

  /// Diagonal |B_{alpha k}(w_i)|^2 as a (basis x grid) real matrix.
  RealMatrix diagonal(std::size_t channel) const;

 private:
  std::shared_ptr<const ControlMatrix> control_;
};

GeneralizedFilterFunction generalized_ff(const ControlMatrix& control);

/// Fidelity filter function F_alpha(w) = sum_k |B_{alpha k}(w)|^2.
struct FidelityFilterFunction {
  std::vector<std::string> channels;
  std::shared_ptr<const FrequencyGrid> grid;
  /// channels x grid size, real and non-negative.
  RealMatrix values;
};

FidelityFilterFunction fidelity_ff(const ControlMatrix& control);

/// Correlation filter functions F_alpha^(gg')(w) between gates g and g'.
///
/// Convention: the first gate index is conjugated,
///   F^(gg')(w) = conj(b_g(w)) . b_g'(w),  b_g(w) = e^{i w t_{g-1}} R_g B^(g)(w),
/// matching the generalized filter function's conjugated first index. The
/// result is Hermitian in (g, g') and sums over all pairs to the fidelity
/// filter function of the whole sequence.
class CorrelationFilterFunction {
 public:
  CorrelationFilterFunction(std::vector<std::string> channels, std::vector<std::string> labels,
                            std::shared_ptr<const FrequencyGrid> grid, Index dim);

  const std::vector<std::string>& channels() const { return channels_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t gate_count() const { return labels_.size(); }
  const FrequencyGrid& grid() const { return *grid_; }
  const std::shared_ptr<const FrequencyGrid>& grid_ptr() const { return grid_; }
  /// Hilbert-space dimension d of the underlying sequence.
  Index dim() const { return dim_; }

  /// G x G matrix at frequency index i.
  Matrix at(std::size_t channel, std::size_t i) const;
  Complex at(std::size_t channel, std::size_t g, std::size_t gp, std::size_t i) const;

  /// Sum over all gate pairs: the fidelity filter function (real).
  RealVector total(std::size_t channel) const;

  /// G^2 x grid size, row index g + G g'.
  const Matrix& values(std::size_t channel) const { return values_[channel]; }
  Matrix& values(std::size_t channel) { return values_[channel]; }

  /// G x G matrix at w = 0.
  const Matrix& zero_frequency(std::size_t channel) const { return zero_[channel]; }
  Matrix& zero_frequency(std::size_t channel) { return zero_[channel]; }

  /// G x G weights of the 1/w^2 asymptotic tail: sum over coinciding jump
  /// times of J_g . J_g'.
  const RealMatrix& tail_weights(std::size_t channel) const { return tails_[channel]; }
  RealMatrix& tail_weights(std::size_t channel) { return tails_[channel]; }

 private:
  std::vector<std::string> channels_;
  std::vector<std::string> labels_;
  std::shared_ptr<const FrequencyGrid> grid_;
  Index dim_;
  std::vector<Matrix> values_;
  std::vector<Matrix> zero_;
  std::vector<RealMatrix> tails_;
};

CorrelationFilterFunction correlation_ff(std::span<const GatePart> parts,
                                         const OperatorBasis& basis);

/// Same result computed directly from a sequence's gate spans, streaming over
/// frequency chunks so no per-gate control matrix is stored.
CorrelationFilterFunction correlation_ff(const PulseSequence& seq, const OperatorBasis& basis,
                                         std::shared_ptr<const FrequencyGrid> grid,
                                         ComputeOptions options = {});

/// Jump clusters shared by the quadrature tail: jumps closer than
/// \p resolution in time are merged. Returns, per cluster, the summed
/// coefficient vector of each source (source index -> vector).
struct JumpCluster {
  double time = 0.0;
  std::vector<RealVector> by_source;
};
std::vector<JumpCluster> cluster_jumps(std::span<const std::vector<Jump>> sources,
                                       Index basis_size, double resolution);

}  // namespace ffcorr
