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
#include "ffcorr/control_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ffcorr/errors.hpp"
#include "ffcorr/parallel.hpp"
#include "segment_kernel.hpp"

namespace ffcorr {

namespace detail {

namespace {

// dt e^{i phi dt/2} sinc(phi dt/2) multiplied by e^{i w t_s}.
Complex kernel(double omega, double gap, double start, double duration) {
  const double phi = omega + gap;
  const double x = 0.5 * phi * duration;
  double sinc;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  } else {
    sinc = std::sin(x) / x;
  }
  return std::polar(duration * sinc, omega * start + x);
}

}  // namespace

std::vector<std::vector<SegmentKernel>> build_segment_kernels(const PulseSequence& seq,
                                                              const PropagatorSet& props,
                                                              const OperatorBasis& basis) {
  const std::size_t channels = seq.channels().size();
  const Index d = seq.dim();
  const Index d2 = d * d;
  std::vector<std::vector<SegmentKernel>> out(channels);
  const auto& items = seq.items();
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto* seg = std::get_if<Segment>(&items[i]);
    if (!seg) continue;
    const Eigensystem& eig = *props.eigensystem(i);
    const Matrix w = eig.vectors.adjoint() * props.before(i);

    // Group (i, j) pairs by the gap lambda_i - lambda_j.
    std::vector<std::pair<double, Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(d2));
    for (Index a = 0; a < d; ++a) {
      for (Index b = 0; b < d; ++b) pairs.emplace_back(eig.energies(a) - eig.energies(b), a + b * d);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    const double scale = std::max(1.0, eig.energies.cwiseAbs().maxCoeff());
    std::vector<Index> group(pairs.size());
    std::vector<double> gaps;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (gaps.empty() || pairs[p].first - gaps.back() > 1e-13 * scale) {
        gaps.push_back(pairs[p].first);
      }
      group[p] = static_cast<Index>(gaps.size() - 1);
    }
    const Index groups = static_cast<Index>(gaps.size());

    for (std::size_t ch = 0; ch < channels; ++ch) {
      const Matrix bp = eig.vectors.adjoint() * seg->noise[ch] * eig.vectors;
      // Column m holds vec(W^dagger (B' restricted to group m) W).
      Matrix stacked = Matrix::Zero(d2, groups);
      std::vector<Matrix> masked(static_cast<std::size_t>(groups), Matrix::Zero(d, d));
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const Index a = pairs[p].second % d;
        const Index b = pairs[p].second / d;
        masked[static_cast<std::size_t>(group[p])](a, b) = bp(a, b);
      }
      for (Index m = 0; m < groups; ++m) {
        const Matrix rotated = w.adjoint() * masked[static_cast<std::size_t>(m)] * w;
        stacked.col(m) = rotated.reshaped();
      }
      SegmentKernel k;
      k.item = i;
      k.start = props.start_time(i);
      k.duration = seg->duration;
      k.gaps = Eigen::Map<const RealVector>(gaps.data(), groups);
      k.coefficients = basis.expansion_operator() * stacked;
      out[ch].push_back(std::move(k));
    }
  }
  return out;
}

void accumulate(const SegmentKernel& k, const double* omega, Index count, Matrix& out) {
  const Index groups = k.gaps.size();
  Matrix factors(groups, count);
  for (Index c = 0; c < count; ++c) {
    for (Index m = 0; m < groups; ++m) {
      factors(m, c) = kernel(omega[c], k.gaps(m), k.start, k.duration);
    }
  }
  out.noalias() += k.coefficients * factors;
}

Vector zero_frequency(const SegmentKernel& k) {
  Vector factors(k.gaps.size());
  for (Index m = 0; m < k.gaps.size(); ++m) factors(m) = kernel(0.0, k.gaps(m), 0.0, k.duration);
  return k.coefficients * factors;
}

void segment_jumps(const PulseSequence& seq, const PropagatorSet& props,
                   const OperatorBasis& basis, std::size_t channel, std::size_t item,
                   std::vector<Jump>& out) {
  const auto& seg = std::get<Segment>(seq.items()[item]);
  const Matrix& b = seg.noise[channel];
  const Matrix& q0 = props.before(item);
  const Matrix& q1 = props.after(item);
  const double t0 = props.start_time(item);
  Matrix start = q0.adjoint() * b * q0;
  Matrix end = q1.adjoint() * b * q1;
  start = 0.5 * (start + start.adjoint()).eval();
  end = 0.5 * (end + end.adjoint()).eval();
  out.push_back(Jump{t0, basis.expand(start)});
  out.push_back(Jump{t0 + seg.duration, -basis.expand(end)});
}

}  // namespace detail

ControlMatrix::ControlMatrix(std::vector<std::string> channels,
                             std::shared_ptr<const FrequencyGrid> grid, double duration,
                             Index basis_size, Matrix total_propagator)
    : channels_(std::move(channels)),
      grid_(std::move(grid)),
      duration_(duration),
      basis_size_(basis_size),
      total_propagator_(std::move(total_propagator)) {
  if (!grid_) throw ValidationError("control matrix needs a frequency grid");
  const Index n = static_cast<Index>(grid_->size());
  values_.assign(channels_.size(), Matrix::Zero(basis_size_, n));
  zero_.assign(channels_.size(), Vector::Zero(basis_size_));
  jumps_.resize(channels_.size());
}

namespace {

void check_basis(const PulseSequence& seq, const OperatorBasis& basis) {
  if (basis.dim() != seq.dim()) {
    std::ostringstream msg;
    msg << "basis dimension " << basis.dim() << " does not match sequence dimension "
        << seq.dim();
    throw ValidationError(msg.str());
  }
}

}  // namespace

RealMatrix control_matrix_time(const PulseSequence& seq, const PropagatorSet& props,
                               const OperatorBasis& basis, double t) {
  check_basis(seq, basis);
  const std::size_t item = props.segment_at(t);
  const auto& seg = std::get<Segment>(seq.items()[item]);
  const Matrix u = props.at(t);
  RealMatrix out(static_cast<Index>(seq.channels().size()), basis.size());
  for (std::size_t ch = 0; ch < seq.channels().size(); ++ch) {
    Matrix rotated = u.adjoint() * seg.noise[ch] * u;
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    out.row(static_cast<Index>(ch)) = basis.expand(rotated).transpose();
  }
  return out;
}

RealMatrix control_matrix_time(const PulseSequence& seq, const OperatorBasis& basis, double t) {
  return control_matrix_time(seq, PropagatorSet(seq), basis, t);
}

namespace {

ControlMatrix compute(const PulseSequence& seq, const PropagatorSet& props,
                      const OperatorBasis& basis, std::shared_ptr<const FrequencyGrid> grid,
                      ComputeOptions options) {
  check_basis(seq, basis);
  ControlMatrix cm(seq.channels(), grid, seq.total_duration(), basis.size(), props.total());
  const auto kernels = detail::build_segment_kernels(seq, props, basis);
  const Index n = static_cast<Index>(grid->size());
  const Index chunks = (n + detail::kChunkColumns - 1) / detail::kChunkColumns;
  const double* omega = grid->values().data();
  for (std::size_t ch = 0; ch < kernels.size(); ++ch) {
    Matrix& values = cm.values(ch);
    parallel_for(static_cast<std::size_t>(chunks), options.threads, [&](std::size_t c) {
      const Index begin = static_cast<Index>(c) * detail::kChunkColumns;
      const Index count = std::min(detail::kChunkColumns, n - begin);
      Matrix block = Matrix::Zero(basis.size(), count);
      for (const auto& k : kernels[ch]) detail::accumulate(k, omega + begin, count, block);
      values.middleCols(begin, count) = block;
    });
    for (const auto& k : kernels[ch]) {
      cm.zero_frequency(ch) += detail::zero_frequency(k);
      detail::segment_jumps(seq, props, basis, ch, k.item, cm.jumps(ch));
    }
  }
  return cm;
}

}  // namespace

ControlMatrix control_matrix_freq(const PulseSequence& seq, const OperatorBasis& basis,
                                  const FrequencyGrid& grid, ComputeOptions options) {
  return control_matrix_freq(seq, basis, std::make_shared<const FrequencyGrid>(grid), options);
}

ControlMatrix control_matrix_freq(const PulseSequence& seq, const OperatorBasis& basis,
                                  std::shared_ptr<const FrequencyGrid> grid,
                                  ComputeOptions options) {
  if (!grid) throw ValidationError("control matrix needs a frequency grid");
  return compute(seq, PropagatorSet(seq), basis, std::move(grid), options);
}

std::vector<GatePart> gate_control_matrices(const PulseSequence& seq, const OperatorBasis& basis,
                                            std::shared_ptr<const FrequencyGrid> grid,
                                            ComputeOptions options) {
  check_basis(seq, basis);
  if (!grid) throw ValidationError("control matrix needs a frequency grid");
  const PropagatorSet props(seq);
  const auto& times = props.boundary_times();
  std::vector<GatePart> parts;
  for (std::size_t g = 0; g < seq.gate_count(); ++g) {
    const GateSpan& span = seq.gates()[g];
    const bool has_segment =
        std::any_of(seq.items().begin() + static_cast<std::ptrdiff_t>(span.begin),
                    seq.items().begin() + static_cast<std::ptrdiff_t>(span.end),
                    [](const Item& it) { return std::holds_alternative<Segment>(it); });
    if (has_segment) {
      const PulseSequence local = seq.gate_sequence(g);
      parts.push_back(GatePart{span.label, compute(local, PropagatorSet(local), basis, grid, options),
                               props.gate_frame(g), times[g]});
    } else {
      Matrix total = Matrix::Identity(seq.dim(), seq.dim());
      for (std::size_t i = span.begin; i < span.end; ++i) total = props.propagator(i) * total;
      parts.push_back(GatePart{span.label,
                               ControlMatrix(seq.channels(), grid, 0.0, basis.size(), total),
                               props.gate_frame(g), times[g]});
    }
  }
  return parts;
}

RealMatrix frame_transfer(const Matrix& frame, const OperatorBasis& basis) {
  return basis.transfer_matrix(frame.adjoint());
}

ControlMatrix concatenate_control_matrices(std::span<const GatePart> parts,
                                           const OperatorBasis& basis) {
  if (parts.empty()) throw ValidationError("nothing to concatenate");
  const ControlMatrix& first = parts.front().control;
  const Index d = basis.dim();
  double offset = 0.0;
  Matrix expected_frame = Matrix::Identity(d, d);
  for (std::size_t g = 0; g < parts.size(); ++g) {
    const GatePart& p = parts[g];
    const ControlMatrix& c = p.control;
    if (c.grid_ptr() != first.grid_ptr() && !(c.grid() == first.grid())) {
      throw ValidationError("gate '" + p.label + "' uses a different frequency grid");
    }
    if (c.channels() != first.channels()) {
      throw ValidationError("gate '" + p.label + "' has different noise channels");
    }
    if (c.basis_size() != basis.size() || c.total_propagator().rows() != d ||
        p.frame.rows() != d || p.frame.cols() != d) {
      throw ValidationError("gate '" + p.label + "' does not match the basis dimension");
    }
    if (std::abs(p.offset - offset) > 1e-9 * std::max(1.0, offset)) {
      std::ostringstream msg;
      msg << "gate '" << p.label << "' starts at " << p.offset << ", expected " << offset;
      throw ValidationError(msg.str());
    }
    const double frame_error = (p.frame - expected_frame).cwiseAbs().maxCoeff();
    if (frame_error > 1e-9) {
      std::ostringstream msg;
      msg << "frame of gate '" << p.label << "' deviates from the preceding gates' product by "
          << frame_error;
      throw ValidationError(msg.str());
    }
    offset += c.duration();
    expected_frame = c.total_propagator() * expected_frame;
  }

  ControlMatrix out(first.channels(), first.grid_ptr(), offset, basis.size(), expected_frame);
  const auto& omega = first.grid().values();
  const Index n = static_cast<Index>(omega.size());
  for (const GatePart& p : parts) {
    const RealMatrix r = frame_transfer(p.frame, basis);
    const Matrix rc = r.cast<Complex>();
    Vector phase(n);
    for (Index i = 0; i < n; ++i) phase(i) = std::polar(1.0, omega[static_cast<std::size_t>(i)] * p.offset);
    for (std::size_t ch = 0; ch < out.channel_count(); ++ch) {
      out.values(ch).noalias() += (rc * p.control.values(ch)) * phase.asDiagonal();
      out.zero_frequency(ch) += rc * p.control.zero_frequency(ch);
      for (const Jump& j : p.control.jumps(ch)) {
        out.jumps(ch).push_back(Jump{j.time + p.offset, r * j.coefficients});
      }
    }
  }
  return out;
}

}  // namespace ffcorr
