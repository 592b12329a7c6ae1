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

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ffcorr/basis.hpp"
#include "ffcorr/control_matrix.hpp"
#include "ffcorr/filter_functions.hpp"
#include "ffcorr/pulse.hpp"
#include "ffcorr/spectra.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

/// Frequency quadrature for int dw/2pi S(w) F(w).
///
/// The integrand is folded onto w >= 0 (F(-w) = conj F(w)) and integrated by
/// the trapezoidal rule over the grid nodes. Two optional corrections close
/// the ends of the grid:
///  - a node at w = 0, so the interval [0, w_1] is not dropped;
///  - the 1/w^2 asymptotic tail beyond the last node, from the jumps of the
///    time-domain control matrix: (1/pi) int_W^inf S/w^2 dw sum J_k J_l.
struct QuadratureOptions {
  bool zero_frequency_node = true;
  bool asymptotic_tail = true;
};

struct QuadratureDiagnostics {
  /// Share of the trace carried by the asymptotic tail term.
  double tail_share = 0.0;
  /// Share carried by the interval [0, w_1].
  double zero_interval_share = 0.0;
  /// Share carried by the last decade of the grid.
  double last_decade_share = 0.0;
  std::vector<std::string> warnings;
};

/// Per-channel real symmetric d^2 x d^2 decay-amplitude matrices Gamma_alpha.
struct DecayAmplitudes {
  std::vector<std::string> channels;
  std::vector<RealMatrix> per_channel;
  QuadratureDiagnostics diagnostics;

  RealMatrix total() const;
  DecayAmplitudes scaled(double factor) const;
};

/// Gamma_{alpha,kl} = (1/pi) int_0^inf dw S_alpha(w) Re[conj(B_k(w)) B_l(w)].
/// \p spectra are aligned with control.channels().
DecayAmplitudes decay_amplitudes_freq(const ControlMatrix& control,
                                      std::span<const SpectralDensity> spectra,
                                      QuadratureOptions options = {});

/// Delta-correlated noise <b(t1) b(t2)> = psd delta(t1 - t2).
struct WhiteAutocorrelation {
  double psd = 0.0;
};

/// Noise autocorrelation <b(t1) b(t2)> = C(t1 - t2).
using Autocorrelation = std::variant<WhiteAutocorrelation, std::function<double(double)>>;

/// Time-domain decay amplitudes
///   Gamma_{alpha,kl} = int int dt1 dt2 C_alpha(t1 - t2) B_{alpha k}(t1) B_{alpha l}(t2)
/// by Gauss-Legendre quadrature with \p nodes_per_segment nodes on every
/// segment. White noise collapses one integral. Used as an independent check
/// of the frequency route.
DecayAmplitudes decay_amplitudes_time(const PulseSequence& seq, const OperatorBasis& basis,
                                      std::span<const Autocorrelation> autocorrelations,
                                      int nodes_per_segment = 48);

/// Averaged error process in the interaction picture, as a real transfer
/// matrix acting on basis-coefficient vectors of density operators. Only
/// first-order Magnus terms enter, so the map is correct up to a unitary
/// rotation.
struct ProcessMap {
  RealMatrix transfer;
};

/// T = 1 + sum_alpha sum_kl Gamma_{alpha,kl} R(sigma_k, sigma_l), where R is
/// the transfer matrix of rho -> sigma_k rho sigma_l - {sigma_k sigma_l, rho}/2.
ProcessMap process_map(const DecayAmplitudes& gamma, const OperatorBasis& basis);

/// Total process rho -> U_c Utilde(rho) U_c^dagger: the error map followed by
/// the ideal gate.
ProcessMap compose_with_ideal(const ProcessMap& error, const Matrix& ideal,
                              const OperatorBasis& basis);

/// Choi matrix J = sum_kl T_kl conj(sigma_l) (x) sigma_k (trace d).
Matrix choi_matrix(const ProcessMap& map, const OperatorBasis& basis);
/// Ascending Choi eigenvalues; small negative values flag the truncation's
/// departure from complete positivity.
RealVector choi_eigenvalues(const ProcessMap& map, const OperatorBasis& basis);

struct FidelityResult {
  double fidelity = 1.0;
  double infidelity = 0.0;
  std::vector<double> per_channel_infidelity;
};

/// Average gate fidelity F = 1 - sum_{alpha k} Gamma_{alpha,kk} / (d + 1).
FidelityResult fidelity(const DecayAmplitudes& gamma, Index dim);

/// G x G correlation infidelities
///   I^(gg') = 1/(d+1) sum_alpha int dw/2pi S_alpha(w) F_alpha^(gg')(w).
/// Integrated over the whole line the entries are real and symmetric; the
/// diagonal holds the single-gate infidelities and the sum of all entries is
/// the total infidelity.
struct CorrelationInfidelities {
  std::vector<std::string> labels;
  std::vector<std::string> channels;
  RealMatrix total;
  std::vector<RealMatrix> per_channel;

  double sum() const { return total.sum(); }
};

CorrelationInfidelities correlation_infidelities(const CorrelationFilterFunction& cff,
                                                 std::span<const SpectralDensity> spectra,
                                                 QuadratureOptions options = {});

}  // namespace ffcorr
