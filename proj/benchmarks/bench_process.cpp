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
#include <benchmark/benchmark.h>

#include <vector>

#include "ffcorr/circuits.hpp"
#include "ffcorr/process.hpp"

namespace {

using namespace ffcorr;

void BM_DecayAmplitudesFreq(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto b = OperatorBasis::pauli(n);
  const auto seq = qft_sequence(n, false);
  const auto cm = control_matrix_freq(seq, b, FrequencyGrid::default_for(seq.total_duration()));
  const std::vector<SpectralDensity> s{SpectralDensity::power_law(1e-4, 1.0, 1e-2, 10.0)};
  for (auto _ : state) {
    auto g = decay_amplitudes_freq(cm, s);
    benchmark::DoNotOptimize(g.per_channel[0].data());
  }
}
BENCHMARK(BM_DecayAmplitudesFreq)->DenseRange(2, 3)->Unit(benchmark::kMillisecond);

void BM_ProcessMapAndChoi(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto b = OperatorBasis::pauli(n);
  const auto seq = qft_sequence(n, false);
  const auto cm = control_matrix_freq(seq, b, FrequencyGrid::logarithmic(1e-3, 1e3, 1024));
  const std::vector<SpectralDensity> s{SpectralDensity::white(1e-4)};
  const auto gamma = decay_amplitudes_freq(cm, s);
  for (auto _ : state) {
    const auto map = process_map(gamma, b);
    auto eig = choi_eigenvalues(map, b);
    benchmark::DoNotOptimize(eig.data());
  }
}
BENCHMARK(BM_ProcessMapAndChoi)->DenseRange(2, 4)->Unit(benchmark::kMicrosecond);

}  // namespace
