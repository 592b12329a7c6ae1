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
#include "ffcorr/montecarlo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include "ffcorr/errors.hpp"
#include "ffcorr/parallel.hpp"
#include "ffcorr/propagation.hpp"

namespace ffcorr {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ index);
}

struct NoiseSynthesizer::Plan {
  fftw_complex* spectrum = nullptr;
  double* series = nullptr;
  fftw_plan plan = nullptr;
};

NoiseSynthesizer::NoiseSynthesizer(std::size_t window_samples, double dt)
    : length_(window_samples), dt_(dt), plan_(new Plan) {
  if (window_samples < 2) throw ValidationError("noise window needs at least two samples");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be positive");
  plan_->spectrum = fftw_alloc_complex(length_ / 2 + 1);
  plan_->series = fftw_alloc_real(length_);
  std::lock_guard lock(fftw_planner_mutex());
  plan_->plan = fftw_plan_dft_c2r_1d(static_cast<int>(length_), plan_->spectrum, plan_->series,
                                     FFTW_ESTIMATE);
}

NoiseSynthesizer::~NoiseSynthesizer() {
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_->plan);
  }
  fftw_free(plan_->spectrum);
  fftw_free(plan_->series);
  delete plan_;
}

double NoiseSynthesizer::frequency_step() const {
  return 2.0 * std::numbers::pi / (static_cast<double>(length_) * dt_);
}

std::vector<double> NoiseSynthesizer::draw(const SpectralDensity& spectrum, std::size_t samples,
                                           std::mt19937_64& rng) {
  if (samples > length_) throw RangeError("requested more samples than the noise window holds");
  const double dw = frequency_step();
  const std::size_t half = length_ / 2;
  std::normal_distribution<double> normal;
  for (std::size_t m = 0; m <= half; ++m) {
    const bool edge = m == 0 || (m == half && length_ % 2 == 0);
    const double var = spectrum(dw * static_cast<double>(m)) * dw / std::numbers::pi;
    if (edge) {
      const double a = std::sqrt(0.5 * var) * normal(rng);
      plan_->spectrum[m][0] = a;
      plan_->spectrum[m][1] = 0.0;
    } else {
      const double sd = std::sqrt(var);
      const double a = sd * normal(rng);
      const double c = sd * normal(rng);
      plan_->spectrum[m][0] = 0.5 * a;
      plan_->spectrum[m][1] = -0.5 * c;
    }
  }
  fftw_execute(plan_->plan);
  return std::vector<double>(plan_->series, plan_->series + samples);
}

namespace {

double resolve_dt(double duration, const TrajectoryConfig& cfg) {
  if (cfg.dt > 0.0) return cfg.dt;
  if (cfg.substeps < 1) throw ValidationError("substeps must be positive");
  return duration / cfg.substeps;
}

std::size_t window_for(std::size_t samples, int factor) {
  if (factor < 1) throw ValidationError("window factor must be >= 1");
  return next_power_of_two(std::max<std::size_t>(2, samples * static_cast<std::size_t>(factor)));
}

}  // namespace

std::vector<double> synthesize_trajectory(const SpectralDensity& spectrum, double duration,
                                          const TrajectoryConfig& cfg, std::mt19937_64& rng) {
  if (!(duration > 0.0)) throw ValidationError("trajectory duration must be positive");
  const double dt = resolve_dt(duration, cfg);
  const auto samples = static_cast<std::size_t>(std::llround(std::ceil(duration / dt - 1e-9)));
  NoiseSynthesizer synth(window_for(samples, cfg.window_factor), dt);
  return synth.draw(spectrum, samples, rng);
}

RealMatrix averaged_periodogram(const SpectralDensity& spectrum, std::size_t samples, double dt,
                                std::size_t trajectories, std::uint64_t seed) {
  if (trajectories == 0) throw ValidationError("need at least one trajectory");
  NoiseSynthesizer synth(samples, dt);
  const std::size_t half = samples / 2;
  std::vector<double> in(samples);
  fftw_complex* out = fftw_alloc_complex(half + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(samples), in.data(), out, FFTW_ESTIMATE);
  }
  RealMatrix result = RealMatrix::Zero(static_cast<Index>(half), 2);
  for (std::size_t t = 0; t < trajectories; ++t) {
    std::mt19937_64 rng(trajectory_seed(seed, t));
    const auto series = synth.draw(spectrum, samples, rng);
    std::copy(series.begin(), series.end(), in.begin());
    fftw_execute(plan);
    for (std::size_t m = 1; m <= half; ++m) {
      const double p = out[m][0] * out[m][0] + out[m][1] * out[m][1];
      result(static_cast<Index>(m - 1), 1) += p * dt / static_cast<double>(samples);
    }
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  for (std::size_t m = 1; m <= half; ++m) {
    result(static_cast<Index>(m - 1), 0) = synth.frequency_step() * static_cast<double>(m);
  }
  result.col(1) /= static_cast<double>(trajectories);
  return result;
}

namespace {

struct Accumulator {
  RealMatrix t_sum, t_sq;
  double inf_sum = 0.0, inf_sq = 0.0;
  double max_unitarity = 0.0;
};

constexpr std::size_t kBlock = 16;

}  // namespace

MonteCarloResult simulate_process(const PulseSequence& seq,
                                  std::span<const SpectralDensity> spectra,
                                  const OperatorBasis& basis, const TrajectoryConfig& cfg) {
  const std::size_t channels = seq.channels().size();
  if (spectra.size() != channels) {
    throw ValidationError("expected one spectrum per noise channel");
  }
  if (basis.dim() != seq.dim()) throw ValidationError("basis dimension does not match sequence");
  if (cfg.trajectories < 2) throw ValidationError("need at least two trajectories");

  const auto& items = seq.items();
  double shortest = std::numeric_limits<double>::infinity();
  for (const auto& it : items) {
    if (const auto* s = std::get_if<Segment>(&it)) shortest = std::min(shortest, s->duration);
  }
  const double dt = resolve_dt(shortest, cfg);
  std::vector<std::size_t> steps(items.size(), 0);
  std::size_t samples = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto* s = std::get_if<Segment>(&items[i]);
    if (!s) continue;
    const double k = s->duration / dt;
    const double r = std::round(k);
    if (r < 1.0 || std::abs(k - r) > 1e-6 * std::max(1.0, r)) {
      std::ostringstream msg;
      msg << "segment " << i << " duration " << s->duration << " is not a multiple of dt " << dt;
      throw RangeError(msg.str());
    }
    steps[i] = static_cast<std::size_t>(r);
    samples += steps[i];
  }
  const std::size_t window = window_for(samples, cfg.window_factor);
  const Matrix ideal_adj = PropagatorSet(seq).total().adjoint();
  const Index d = seq.dim();
  const double dd = static_cast<double>(d);
  const Index n = basis.size();

  const std::size_t blocks = (cfg.trajectories + kBlock - 1) / kBlock;
  std::vector<Accumulator> partial(blocks);
  const unsigned threads = cfg.threads == 0 ? default_thread_count() : cfg.threads;
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, blocks));
  // One synthesizer per worker; blocks are assigned round-robin but every
  // block's result depends only on its trajectory indices.
  parallel_for(workers, static_cast<unsigned>(workers), [&](std::size_t worker) {
    NoiseSynthesizer synth(window, dt);
    for (std::size_t blk = worker; blk < blocks; blk += workers) {
      Accumulator acc{RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
      const std::size_t begin = blk * kBlock;
      const std::size_t end = std::min(cfg.trajectories, begin + kBlock);
      for (std::size_t t = begin; t < end; ++t) {
        std::mt19937_64 rng(trajectory_seed(cfg.seed, t));
        std::vector<std::vector<double>> noise(channels);
        for (std::size_t ch = 0; ch < channels; ++ch) noise[ch] = synth.draw(spectra[ch], samples, rng);
        Matrix u = Matrix::Identity(d, d);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (const auto* g = std::get_if<InstantaneousGate>(&items[i])) {
            u = g->unitary * u;
            continue;
          }
          const auto& s = std::get<Segment>(items[i]);
          for (std::size_t k = 0; k < steps[i]; ++k, ++idx) {
            Matrix h = s.hamiltonian;
            for (std::size_t ch = 0; ch < channels; ++ch) h += noise[ch][idx] * s.noise[ch];
            u = expm_hermitian(h, dt) * u;
          }
        }
        acc.max_unitarity = std::max(acc.max_unitarity, unitarity_error(u));
        const Matrix err = ideal_adj * u;
        const RealMatrix t_map = basis.transfer_matrix(err);
        const double inf = 1.0 - (std::norm(err.trace()) + dd) / (dd * (dd + 1.0));
        acc.t_sum += t_map;
        acc.t_sq += t_map.cwiseAbs2();
        acc.inf_sum += inf;
        acc.inf_sq += inf * inf;
      }
      partial[blk] = std::move(acc);
    }
  });

  RealMatrix t_sum = RealMatrix::Zero(n, n), t_sq = RealMatrix::Zero(n, n);
  double inf_sum = 0.0, inf_sq = 0.0;
  MonteCarloResult out;
  for (const auto& acc : partial) {
    t_sum += acc.t_sum;
    t_sq += acc.t_sq;
    inf_sum += acc.inf_sum;
    inf_sq += acc.inf_sq;
    out.max_unitarity_error = std::max(out.max_unitarity_error, acc.max_unitarity);
  }
  const double count = static_cast<double>(cfg.trajectories);
  out.trajectories = cfg.trajectories;
  out.dt = dt;
  out.transfer_mean = t_sum / count;
  const RealMatrix var =
      ((t_sq - count * out.transfer_mean.cwiseAbs2()) / (count - 1.0)).cwiseMax(0.0);
  out.transfer_stderr = (var / count).cwiseSqrt();
  out.infidelity = inf_sum / count;
  const double inf_var = std::max(0.0, (inf_sq - count * out.infidelity * out.infidelity) / (count - 1.0));
  out.infidelity_stderr = std::sqrt(inf_var / count);
  return out;
}

}  // namespace ffcorr
