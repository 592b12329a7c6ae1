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

#include <memory>

#include "ffcorr/circuits.hpp"
#include "ffcorr/control_matrix.hpp"
#include "ffcorr/filter_functions.hpp"

namespace {

using namespace ffcorr;

// Alternating X and Y drives under Z noise.
PulseSequence drive_sequence(int segments) {
  const Matrix x = PauliString("X").matrix(), y = PauliString("Y").matrix();
  const Matrix z = PauliString("Z").matrix();
  std::vector<Item> items;
  for (int s = 0; s < segments; ++s) {
    items.emplace_back(Segment{0.1, (s % 2 ? 0.7 * x : 1.3 * y) + 0.2 * z, {0.5 * z}});
  }
  return PulseSequence(2, {"z"}, std::move(items));
}

void BM_ControlMatrixGrid(benchmark::State& state) {
  const auto b = OperatorBasis::pauli(1);
  const auto seq = drive_sequence(16);
  const auto grid = std::make_shared<const FrequencyGrid>(
      FrequencyGrid::logarithmic(1e-3, 1e4, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) {
    auto cm = control_matrix_freq(seq, b, grid, ComputeOptions{1});
    benchmark::DoNotOptimize(cm.values(0).data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ControlMatrixGrid)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Unit(benchmark::kMillisecond);

void BM_ControlMatrixSegments(benchmark::State& state) {
  const auto b = OperatorBasis::pauli(1);
  const auto seq = drive_sequence(static_cast<int>(state.range(0)));
  const auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::logarithmic(1e-3, 1e4, 4096));
  for (auto _ : state) {
    auto cm = control_matrix_freq(seq, b, grid, ComputeOptions{1});
    benchmark::DoNotOptimize(cm.values(0).data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ControlMatrixSegments)->RangeMultiplier(2)->Range(2, 128)->Complexity()->Unit(benchmark::kMillisecond);

void BM_QftCorrelationFF(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto b = OperatorBasis::pauli(n);
  const auto seq = qft_sequence(n, true);
  const auto grid = std::make_shared<const FrequencyGrid>(FrequencyGrid::logarithmic(1e-3, 1e3, 2048));
  for (auto _ : state) {
    auto cff = correlation_ff(seq, b, grid, ComputeOptions{1});
    benchmark::DoNotOptimize(cff.values(0).data());
  }
}
BENCHMARK(BM_QftCorrelationFF)->DenseRange(3, 4)->Unit(benchmark::kMillisecond);

}  // namespace
