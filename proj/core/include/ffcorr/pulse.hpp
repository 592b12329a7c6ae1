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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffcorr/types.hpp"

namespace ffcorr {

/// Piecewise-constant stretch of control. The noise operators B_alpha are
/// held constant over the segment, one per channel of the owning sequence.
struct Segment {
  double duration = 0.0;
  Matrix hamiltonian;
  std::vector<Matrix> noise;
};

/// Ideal zero-duration unitary applied between segments. It carries no noise
/// exposure.
struct InstantaneousGate {
  Matrix unitary;
};

using Item = std::variant<Segment, InstantaneousGate>;

/// Half-open range [begin, end) of items forming one named gate.
struct GateSpan {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Ordered items partitioned into gates, plus the noise channel identifiers
/// every segment supplies an operator for.
///
/// The constructor validates all invariants: at least one segment, positive
/// durations, Hermitian Hamiltonians and noise operators, unitary gates,
/// unique channel identifiers, and gate spans that tile the item list.
class PulseSequence {
 public:
  /// An empty \p gates list means the whole sequence is a single gate
  /// labelled "g1".
  PulseSequence(Index dim, std::vector<std::string> channels, std::vector<Item> items,
                std::vector<GateSpan> gates = {});

  Index dim() const { return dim_; }
  const std::vector<std::string>& channels() const { return channels_; }
  std::size_t channel_index(const std::string& id) const;
  const std::vector<Item>& items() const { return items_; }
  const std::vector<GateSpan>& gates() const { return gates_; }
  std::size_t gate_count() const { return gates_.size(); }
  std::vector<std::string> gate_labels() const;

  double total_duration() const;

  /// Start time of every item (instantaneous gates sit at a single instant).
  std::vector<double> item_start_times() const;

  /// t_0 = 0, t_1, ..., t_G = total duration.
  std::vector<double> boundary_times() const;

  /// Gate \p g as a standalone single-gate sequence starting at t = 0.
  PulseSequence gate_sequence(std::size_t g) const;

  /// The same sequence with every noise operator multiplied by \p factor.
  PulseSequence with_noise_scaled(double factor) const;

 private:
  Index dim_;
  std::vector<std::string> channels_;
  std::vector<Item> items_;
  std::vector<GateSpan> gates_;
};

double total_duration(const PulseSequence& seq);

enum class BoundaryMode {
  /// Each input sequence becomes one gate of the result.
  PerSequence,
  /// Gate spans of the inputs are kept as they are.
  Preserve,
};

/// Appends sequences in order. All inputs must share the dimension and the
/// channel identifiers (in the same order); a mismatch raises a
/// ValidationError naming the offending channels.
PulseSequence concatenate(std::span<const PulseSequence> sequences,
                          BoundaryMode mode = BoundaryMode::PerSequence);

}  // namespace ffcorr
