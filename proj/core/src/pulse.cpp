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
#include "ffcorr/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "ffcorr/errors.hpp"

namespace ffcorr {

namespace {

constexpr double kHermitianTol = 1e-10;

void check_square(const Matrix& m, Index dim, const std::string& what) {
  if (m.rows() != dim || m.cols() != dim) {
    std::ostringstream os;
    os << what << " is " << m.rows() << "x" << m.cols() << ", expected " << dim << "x" << dim;
    throw ValidationError(os.str());
  }
}

void check_hermitian(const Matrix& m, const std::string& what) {
  const double anti = anti_hermitian_norm(m);
  if (anti > kHermitianTol) {
    std::ostringstream os;
    os << what << " is not Hermitian (anti-Hermitian norm " << anti << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

PulseSequence::PulseSequence(Index dim, std::vector<std::string> channels,
                             std::vector<Item> items, std::vector<GateSpan> gates)
    : dim_(dim), channels_(std::move(channels)), items_(std::move(items)), gates_(std::move(gates)) {
  if (dim_ < 1) throw ValidationError("dimension must be positive");

  std::set<std::string> seen;
  for (const auto& id : channels_) {
    if (id.empty()) throw ValidationError("noise channel identifiers must be non-empty");
    if (!seen.insert(id).second) throw ValidationError("duplicate noise channel '" + id + "'");
  }

  std::size_t segments = 0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const std::string where = "item " + std::to_string(i);
    if (const auto* seg = std::get_if<Segment>(&items_[i])) {
      ++segments;
      if (!(seg->duration > 0.0) || !std::isfinite(seg->duration)) {
        throw ValidationError(where + ": segment duration must be positive and finite");
      }
      check_square(seg->hamiltonian, dim_, where + " Hamiltonian");
      check_hermitian(seg->hamiltonian, where + " Hamiltonian");
      if (seg->noise.size() != channels_.size()) {
        throw ValidationError(where + ": segment supplies " + std::to_string(seg->noise.size()) +
                              " noise operators for " + std::to_string(channels_.size()) +
                              " channels");
      }
      for (std::size_t a = 0; a < seg->noise.size(); ++a) {
        const std::string name = where + " noise operator '" + channels_[a] + "'";
        check_square(seg->noise[a], dim_, name);
        check_hermitian(seg->noise[a], name);
      }
    } else {
      const auto& gate = std::get<InstantaneousGate>(items_[i]);
      check_square(gate.unitary, dim_, where + " unitary");
      const double err = unitarity_error(gate.unitary);
      if (err > 1e-10) {
        std::ostringstream os;
        os << where << ": gate is not unitary (|U^dagger U - 1| = " << err << ")";
        throw ValidationError(os.str());
      }
    }
  }
  if (segments == 0) throw ValidationError("a pulse sequence needs at least one segment");

  if (gates_.empty()) {
    gates_.push_back(GateSpan{"g1", 0, items_.size()});
  }
  std::size_t expected = 0;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& span = gates_[g];
    if (span.begin != expected || span.end <= span.begin || span.end > items_.size()) {
      throw ValidationError("gate " + std::to_string(g + 1) + " ('" + span.label +
                            "') does not continue the item partition");
    }
    expected = span.end;
  }
  if (expected != items_.size()) {
    throw ValidationError("gate spans do not cover all items");
  }
}

std::size_t PulseSequence::channel_index(const std::string& id) const {
  auto it = std::find(channels_.begin(), channels_.end(), id);
  if (it == channels_.end()) throw ValidationError("unknown noise channel '" + id + "'");
  return static_cast<std::size_t>(it - channels_.begin());
}

std::vector<std::string> PulseSequence::gate_labels() const {
  std::vector<std::string> labels;
  labels.reserve(gates_.size());
  for (const auto& g : gates_) labels.push_back(g.label);
  return labels;
}

double PulseSequence::total_duration() const {
  double tau = 0.0;
  for (const auto& item : items_) {
    if (const auto* seg = std::get_if<Segment>(&item)) tau += seg->duration;
  }
  return tau;
}

std::vector<double> PulseSequence::item_start_times() const {
  std::vector<double> starts;
  starts.reserve(items_.size());
  double t = 0.0;
  for (const auto& item : items_) {
    starts.push_back(t);
    if (const auto* seg = std::get_if<Segment>(&item)) t += seg->duration;
  }
  return starts;
}

std::vector<double> PulseSequence::boundary_times() const {
  std::vector<double> times{0.0};
  double t = 0.0;
  for (const auto& span : gates_) {
    for (std::size_t i = span.begin; i < span.end; ++i) {
      if (const auto* seg = std::get_if<Segment>(&items_[i])) t += seg->duration;
    }
    times.push_back(t);
  }
  return times;
}

PulseSequence PulseSequence::gate_sequence(std::size_t g) const {
  if (g >= gates_.size()) throw RangeError("gate index out of range");
  const auto& span = gates_[g];
  std::vector<Item> items(items_.begin() + static_cast<std::ptrdiff_t>(span.begin),
                          items_.begin() + static_cast<std::ptrdiff_t>(span.end));
  const bool has_segment = std::any_of(items.begin(), items.end(), [](const Item& it) {
    return std::holds_alternative<Segment>(it);
  });
  if (!has_segment) {
    // A zero-duration gate still needs a segment to form a valid sequence;
    // callers that need its control matrix go through gate_control_matrices.
    throw ValidationError("gate '" + span.label + "' has no segment");
  }
  return PulseSequence(dim_, channels_, std::move(items),
                       {GateSpan{span.label, 0, span.end - span.begin}});
}

PulseSequence PulseSequence::with_noise_scaled(double factor) const {
  std::vector<Item> items = items_;
  for (auto& item : items) {
    if (auto* seg = std::get_if<Segment>(&item)) {
      for (auto& b : seg->noise) b *= factor;
    }
  }
  return PulseSequence(dim_, channels_, std::move(items), gates_);
}

double total_duration(const PulseSequence& seq) { return seq.total_duration(); }

PulseSequence concatenate(std::span<const PulseSequence> sequences, BoundaryMode mode) {
  if (sequences.empty()) throw ValidationError("nothing to concatenate");
  const auto& first = sequences.front();
  std::vector<Item> items;
  std::vector<GateSpan> gates;
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    const auto& seq = sequences[s];
    if (seq.dim() != first.dim()) {
      throw ValidationError("sequence " + std::to_string(s) + " has dimension " +
                            std::to_string(seq.dim()) + ", expected " +
                            std::to_string(first.dim()));
    }
    if (seq.channels() != first.channels()) {
      std::ostringstream os;
      os << "sequence " << s << " has noise channels [";
      for (std::size_t i = 0; i < seq.channels().size(); ++i) os << (i ? ", " : "") << seq.channels()[i];
      os << "], expected [";
      for (std::size_t i = 0; i < first.channels().size(); ++i) os << (i ? ", " : "") << first.channels()[i];
      os << "]";
      throw ValidationError(os.str());
    }
    const std::size_t offset = items.size();
    items.insert(items.end(), seq.items().begin(), seq.items().end());
    if (mode == BoundaryMode::Preserve) {
      for (const auto& span : seq.gates()) {
        gates.push_back(GateSpan{span.label, span.begin + offset, span.end + offset});
      }
    } else {
      std::string label;
      for (std::size_t g = 0; g < seq.gates().size(); ++g) {
        label += (g ? "+" : "") + seq.gates()[g].label;
      }
      gates.push_back(GateSpan{label, offset, items.size()});
    }
  }
  return PulseSequence(first.dim(), first.channels(), std::move(items), std::move(gates));
}

}  // namespace ffcorr
