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
#include "ffcorr/filter_functions.hpp"

#include <algorithm>
#include <functional>

#include "ffcorr/errors.hpp"
#include "ffcorr/parallel.hpp"
#include "segment_kernel.hpp"

namespace ffcorr {

GeneralizedFilterFunction::GeneralizedFilterFunction(std::shared_ptr<const ControlMatrix> control)
    : control_(std::move(control)) {
  if (!control_) throw ValidationError("generalized filter function needs a control matrix");
}

Matrix GeneralizedFilterFunction::at(std::size_t channel, std::size_t i) const {
  const auto b = control_->values(channel).col(static_cast<Index>(i));
  return b.conjugate() * b.transpose();
}

RealMatrix GeneralizedFilterFunction::diagonal(std::size_t channel) const {
  return control_->values(channel).cwiseAbs2();
}

GeneralizedFilterFunction generalized_ff(const ControlMatrix& control) {
  return GeneralizedFilterFunction(std::make_shared<const ControlMatrix>(control));
}

FidelityFilterFunction fidelity_ff(const ControlMatrix& control) {
  FidelityFilterFunction out;
  out.channels = control.channels();
  out.grid = control.grid_ptr();
  out.values.resize(static_cast<Index>(control.channel_count()),
                    static_cast<Index>(control.grid().size()));
  for (std::size_t ch = 0; ch < control.channel_count(); ++ch) {
    out.values.row(static_cast<Index>(ch)) = control.values(ch).cwiseAbs2().colwise().sum();
  }
  return out;
}

CorrelationFilterFunction::CorrelationFilterFunction(std::vector<std::string> channels,
                                                     std::vector<std::string> labels,
                                                     std::shared_ptr<const FrequencyGrid> grid,
                                                     Index dim)
    : channels_(std::move(channels)), labels_(std::move(labels)), grid_(std::move(grid)), dim_(dim) {
  if (!grid_) throw ValidationError("correlation filter function needs a frequency grid");
  const Index g = static_cast<Index>(labels_.size());
  values_.assign(channels_.size(), Matrix::Zero(g * g, static_cast<Index>(grid_->size())));
  zero_.assign(channels_.size(), Matrix::Zero(g, g));
  tails_.assign(channels_.size(), RealMatrix::Zero(g, g));
}

Matrix CorrelationFilterFunction::at(std::size_t channel, std::size_t i) const {
  const Index g = static_cast<Index>(labels_.size());
  return values_[channel].col(static_cast<Index>(i)).reshaped(g, g);
}

Complex CorrelationFilterFunction::at(std::size_t channel, std::size_t g, std::size_t gp,
                                      std::size_t i) const {
  const std::size_t n = labels_.size();
  return values_[channel](static_cast<Index>(g + n * gp), static_cast<Index>(i));
}

RealVector CorrelationFilterFunction::total(std::size_t channel) const {
  return values_[channel].colwise().sum().real().transpose();
}

std::vector<JumpCluster> cluster_jumps(std::span<const std::vector<Jump>> sources,
                                       Index basis_size, double resolution) {
  struct Entry {
    double time;
    std::size_t source;
    const RealVector* coefficients;
  };
  std::vector<Entry> entries;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (const Jump& j : sources[s]) {
      if (j.coefficients.size() != basis_size) {
        throw ValidationError("jump coefficients do not match the basis size");
      }
      entries.push_back(Entry{j.time, s, &j.coefficients});
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.time < b.time; });
  std::vector<JumpCluster> clusters;
  double previous = 0.0;
  for (const Entry& e : entries) {
    if (clusters.empty() || e.time - previous >= resolution) {
      clusters.push_back(JumpCluster{e.time, std::vector<RealVector>(sources.size(),
                                                                     RealVector::Zero(basis_size))});
    }
    clusters.back().by_source[e.source] += *e.coefficients;
    previous = e.time;
  }
  return clusters;
}

namespace {

// Fills the gates' control-matrix columns [begin, begin + count) for a channel.
using BlockFn = std::function<void(std::size_t gate, std::size_t channel, Index begin,
                                   Index count, Matrix& block)>;

void assemble(CorrelationFilterFunction& cff, Index basis_size, const BlockFn& fill,
              const std::vector<std::vector<Vector>>& zero,
              const std::vector<std::vector<std::vector<Jump>>>& jumps, unsigned threads) {
  const std::size_t gates = cff.gate_count();
  const Index ng = static_cast<Index>(gates);
  const Index n = static_cast<Index>(cff.grid().size());
  const Index chunks = (n + detail::kChunkColumns - 1) / detail::kChunkColumns;
  const double resolution = 1.0 / cff.grid().back();
  for (std::size_t ch = 0; ch < cff.channels().size(); ++ch) {
    Matrix& values = cff.values(ch);
    parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
      const Index begin = static_cast<Index>(c) * detail::kChunkColumns;
      const Index count = std::min(detail::kChunkColumns, n - begin);
      std::vector<Matrix> blocks(gates);
      for (std::size_t g = 0; g < gates; ++g) {
        blocks[g] = Matrix::Zero(basis_size, count);
        fill(g, ch, begin, count, blocks[g]);
      }
      Matrix stacked(basis_size, ng);
      for (Index col = 0; col < count; ++col) {
        for (std::size_t g = 0; g < gates; ++g) {
          stacked.col(static_cast<Index>(g)) = blocks[g].col(col);
        }
        const Matrix f = stacked.adjoint() * stacked;
        values.col(begin + col) = f.reshaped();
      }
    });
    Matrix stacked(basis_size, ng);
    for (std::size_t g = 0; g < gates; ++g) stacked.col(static_cast<Index>(g)) = zero[ch][g];
    cff.zero_frequency(ch) = stacked.adjoint() * stacked;

    RealMatrix& tails = cff.tail_weights(ch);
    for (const JumpCluster& cluster : cluster_jumps(jumps[ch], basis_size, resolution)) {
      RealMatrix j(basis_size, ng);
      for (std::size_t g = 0; g < gates; ++g) j.col(static_cast<Index>(g)) = cluster.by_source[g];
      tails += j.transpose() * j;
    }
  }
}

}  // namespace

CorrelationFilterFunction correlation_ff(std::span<const GatePart> parts,
                                         const OperatorBasis& basis) {
  if (parts.empty()) throw ValidationError("correlation filter function needs at least one gate");
  // Validates grids, channels, offsets and frames.
  const ControlMatrix whole = concatenate_control_matrices(parts, basis);
  std::vector<std::string> labels;
  for (const auto& p : parts) labels.push_back(p.label);
  CorrelationFilterFunction cff(whole.channels(), labels, whole.grid_ptr(), basis.dim());

  const std::size_t channels = whole.channel_count();
  std::vector<Matrix> transfers;
  for (const auto& p : parts) transfers.push_back(frame_transfer(p.frame, basis).cast<Complex>());
  std::vector<std::vector<Vector>> zero(channels);
  std::vector<std::vector<std::vector<Jump>>> jumps(channels);
  for (std::size_t ch = 0; ch < channels; ++ch) {
    for (std::size_t g = 0; g < parts.size(); ++g) {
      zero[ch].push_back(transfers[g] * parts[g].control.zero_frequency(ch));
      std::vector<Jump> js;
      const RealMatrix r = transfers[g].real();
      for (const Jump& j : parts[g].control.jumps(ch)) {
        js.push_back(Jump{j.time + parts[g].offset, r * j.coefficients});
      }
      jumps[ch].push_back(std::move(js));
    }
  }
  const auto& omega = whole.grid().values();
  auto fill = [&](std::size_t g, std::size_t ch, Index begin, Index count, Matrix& block) {
    const double t = parts[g].offset;
    block.noalias() = transfers[g] * parts[g].control.values(ch).middleCols(begin, count);
    for (Index c = 0; c < count; ++c) {
      block.col(c) *= std::polar(1.0, omega[static_cast<std::size_t>(begin + c)] * t);
    }
  };
  assemble(cff, basis.size(), fill, zero, jumps, 1);
  return cff;
}

CorrelationFilterFunction correlation_ff(const PulseSequence& seq, const OperatorBasis& basis,
                                         std::shared_ptr<const FrequencyGrid> grid,
                                         ComputeOptions options) {
  if (!grid) throw ValidationError("correlation filter function needs a frequency grid");
  if (basis.dim() != seq.dim()) {
    throw ValidationError("basis dimension does not match sequence dimension");
  }
  const PropagatorSet props(seq);
  const auto kernels = detail::build_segment_kernels(seq, props, basis);
  const std::size_t channels = seq.channels().size();
  const std::size_t gates = seq.gate_count();
  std::vector<std::size_t> gate_of(seq.items().size());
  for (std::size_t g = 0; g < gates; ++g) {
    for (std::size_t i = seq.gates()[g].begin; i < seq.gates()[g].end; ++i) gate_of[i] = g;
  }
  CorrelationFilterFunction cff(seq.channels(), seq.gate_labels(), grid, seq.dim());

  // kernels_by_gate[ch][g] lists that gate's segment kernels.
  std::vector<std::vector<std::vector<const detail::SegmentKernel*>>> by_gate(
      channels, std::vector<std::vector<const detail::SegmentKernel*>>(gates));
  std::vector<std::vector<Vector>> zero(channels,
                                        std::vector<Vector>(gates, Vector::Zero(basis.size())));
  std::vector<std::vector<std::vector<Jump>>> jumps(channels,
                                                    std::vector<std::vector<Jump>>(gates));
  for (std::size_t ch = 0; ch < channels; ++ch) {
    for (const auto& k : kernels[ch]) {
      const std::size_t g = gate_of[k.item];
      by_gate[ch][g].push_back(&k);
      zero[ch][g] += detail::zero_frequency(k);
      detail::segment_jumps(seq, props, basis, ch, k.item, jumps[ch][g]);
    }
  }
  const double* omega = grid->values().data();
  auto fill = [&](std::size_t g, std::size_t ch, Index begin, Index count, Matrix& block) {
    for (const auto* k : by_gate[ch][g]) detail::accumulate(*k, omega + begin, count, block);
  };
  assemble(cff, basis.size(), fill, zero, jumps, options.threads);
  return cff;
}

}  // namespace ffcorr
