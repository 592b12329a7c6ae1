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

#include <vector>

#include "ffcorr/basis.hpp"
#include "ffcorr/control_matrix.hpp"
#include "ffcorr/propagation.hpp"
#include "ffcorr/pulse.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr::detail {

/// Fourier data of one segment and one channel, with eigenvalue gaps merged:
///   B_k(w) += sum_m coefficients(k, m) e^{i w start} K(w + gaps(m)).
struct SegmentKernel {
  std::size_t item = 0;
  double start = 0.0;
  double duration = 0.0;
  RealVector gaps;
  Matrix coefficients;
};

/// Kernels of every segment of \p seq for every channel (outer index is the
/// channel), expressed in the frame of the whole sequence.
std::vector<std::vector<SegmentKernel>> build_segment_kernels(const PulseSequence& seq,
                                                              const PropagatorSet& props,
                                                              const OperatorBasis& basis);

/// out(:, c) += contribution of \p kernel at frequency omega[c].
void accumulate(const SegmentKernel& kernel, const double* omega, Index count, Matrix& out);

/// Segment kernel at w = 0.
Vector zero_frequency(const SegmentKernel& kernel);

/// Jumps of one segment: +B(t_s^+) at its start and -B(t_e^-) at its end.
void segment_jumps(const PulseSequence& seq, const PropagatorSet& props,
                   const OperatorBasis& basis, std::size_t channel, std::size_t item,
                   std::vector<Jump>& out);

/// Number of frequency columns processed per work unit. Fixed so results do
/// not depend on the worker count.
inline constexpr Index kChunkColumns = 512;

}  // namespace ffcorr::detail
