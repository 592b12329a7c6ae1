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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ffcorr/basis.hpp"
#include "ffcorr/pulse.hpp"
#include "ffcorr/spectra.hpp"
#include "ffcorr/types.hpp"

namespace ffcorr {

struct TrajectoryConfig {
  /// Sample interval; 0 selects shortest segment / substeps.
  double dt = 0.0;
  int substeps = 1000;
  std::size_t trajectories = 1000;
  std::uint64_t seed = 0;
  /// Each trajectory is synthesized over window_factor x the sequence
  /// duration (rounded up to a power of two samples), which sets the lowest
  /// resolved frequency 2 pi / (window_factor tau).
  int window_factor = 8;
  /// 0 selects default_thread_count().
  unsigned threads = 0;
};

/// Seed of trajectory \p index: splitmix64(master ^ index).
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

/// Spectral synthesis of stationary Gaussian noise on a uniform time grid.
///
/// A series of length L is built from independent Gaussian Fourier
/// amplitudes at w_m = 2 pi m / (L dt): b(t_n) = sum_m a_m cos(w_m t_n) +
/// c_m sin(w_m t_n) with Var(a_m) = Var(c_m) = S(w_m) dw / pi (half of that
/// for the zero and Nyquist bins), so the autocorrelation is the discretized
/// inverse transform of S. Owns an FFTW plan; one instance per thread.
class NoiseSynthesizer {
 public:
  NoiseSynthesizer(std::size_t window_samples, double dt);
  ~NoiseSynthesizer();
  NoiseSynthesizer(const NoiseSynthesizer&) = delete;
  NoiseSynthesizer& operator=(const NoiseSynthesizer&) = delete;

  std::size_t window_samples() const { return length_; }
  double dt() const { return dt_; }
  /// Angular frequency spacing 2 pi / (L dt).
  double frequency_step() const;

  /// Draws one series and returns its first \p samples values (<= window).
  std::vector<double> draw(const SpectralDensity& spectrum, std::size_t samples,
                           std::mt19937_64& rng);

 private:
  std::size_t length_;
  double dt_;
  struct Plan;
  Plan* plan_;
};

std::vector<double> synthesize_trajectory(const SpectralDensity& spectrum, double duration,
                                          const TrajectoryConfig& cfg, std::mt19937_64& rng);

/// Periodogram S_hat(w_m) = |sum_n b_n e^{-i w_m t_n}|^2 dt / L averaged over
/// \p trajectories series of \p samples points, for w_m = 2 pi m / (L dt),
/// m = 1 .. L/2. Columns: omega, estimate.
RealMatrix averaged_periodogram(const SpectralDensity& spectrum, std::size_t samples, double dt,
                                std::size_t trajectories, std::uint64_t seed);

struct MonteCarloResult {
  /// Mean and standard error of the interaction-picture error transfer
  /// matrix tr(sigma_k U sigma_l U^dagger), U = U_c^dagger U_noisy.
  RealMatrix transfer_mean;
  RealMatrix transfer_stderr;
  /// Average gate infidelity of the averaged error process and its standard
  /// error over trajectories.
  double infidelity = 0.0;
  double infidelity_stderr = 0.0;
  std::size_t trajectories = 0;
  double dt = 0.0;
  /// Worst |U^dagger U - 1| seen over all trajectories.
  double max_unitarity_error = 0.0;
};

/// Brute-force average over noise realizations: each trajectory propagates
/// H(t) = H_c + sum_alpha b_alpha(t) B_alpha with the noise held constant
/// over steps of length dt. Segment durations must be integer multiples of
/// dt (RangeError otherwise). Results are bitwise reproducible for a fixed
/// seed regardless of the thread count.
MonteCarloResult simulate_process(const PulseSequence& seq,
                                  std::span<const SpectralDensity> spectra,
                                  const OperatorBasis& basis, const TrajectoryConfig& cfg);

}  // namespace ffcorr
