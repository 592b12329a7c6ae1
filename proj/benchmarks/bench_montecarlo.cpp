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

#include <random>
#include <vector>

#include "ffcorr/circuits.hpp"
#include "ffcorr/montecarlo.hpp"

namespace {

using namespace ffcorr;

void BM_NoiseSynthesis(benchmark::State& state) {
  const auto length = static_cast<std::size_t>(state.range(0));
  NoiseSynthesizer synth(length, 1e-3);
  const auto s = SpectralDensity::power_law(1.0, 1.0, 1.0, 600.0);
  std::mt19937_64 rng(1);
  for (auto _ : state) {
    auto x = synth.draw(s, length, rng);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NoiseSynthesis)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_SimulateProcess(benchmark::State& state) {
  const auto b = OperatorBasis::pauli(1);
  const auto seq = spin_echo_sequence(0.5, PiPulse{}, NoiseSpec{"z", 0.5 * PauliString("Z").matrix()});
  const std::vector<SpectralDensity> s{SpectralDensity::power_law(1e-3, 1.0, 1.0, 300.0)};
  TrajectoryConfig cfg;
  cfg.dt = 1e-3;
  cfg.trajectories = static_cast<std::size_t>(state.range(0));
  cfg.threads = 1;
  for (auto _ : state) {
    auto r = simulate_process(seq, s, b, cfg);
    benchmark::DoNotOptimize(r.infidelity);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateProcess)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
