// Copyright 2026, The driftstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>

#include "driftstream/kernels.hpp"
#include "driftstream/naive_bayes.hpp"
#include "driftstream/prequential.hpp"
#include "driftstream/rng.hpp"
#include "driftstream/synth.hpp"

using namespace driftstream;

namespace {

std::vector<double> lognormal(std::size_t n) {
  Rng rng(1);
  std::vector<double> out(n);
  for (auto& v : out) v = std::exp(rng.normal());
  return out;
}

void BM_BoxCoxLoglikSerial(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::boxcox_loglik(x, 0.3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BoxCoxLoglikOmp(benchmark::State& state) {
  const auto x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::boxcox_loglik(x, 0.3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_RollingMeanSerial(benchmark::State& state) {
  const auto x = lognormal(70774);
  const auto w = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::rolling_mean(x, w));
}

void BM_RollingMeanOmp(benchmark::State& state) {
  const auto x = lognormal(70774);
  const auto w = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::rolling_mean(x, w));
}

struct Probes {
  NaiveBayes model;
  std::vector<EncodedInstance> probes;
};

const Probes& probes() {
  static const Probes p = [] {
    const NbLayout layout{{31, 21, 7, 13, 5}, 1, 3};
    Rng rng(2);
    auto draw = [&](std::int64_t i) {
      EncodedInstance x{i, {}, {rng.normal()}};
      for (int card : layout.cardinalities) x.categories.push_back(static_cast<int>(rng.below(card)));
      return x;
    };
    std::vector<EncodedLabeled> train;
    for (int i = 0; i < 5000; ++i) train.push_back({draw(i), {static_cast<int>(rng.below(3))}});
    std::vector<EncodedInstance> xs;
    for (int i = 0; i < 70774; ++i) xs.push_back(draw(i));
    return Probes{NaiveBayes::fit(layout, train), std::move(xs)};
  }();
  return p;
}

void BM_PredictBatchSerial(benchmark::State& state) {
  const auto& p = probes();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::predict_batch(p.model, p.probes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.probes.size()));
}

void BM_PredictBatchOmp(benchmark::State& state) {
  const auto& p = probes();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::omp::predict_batch(p.model, p.probes));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.probes.size()));
}

const PreparedStream& paper_stream() {
  static const PreparedStream p = [] {
    const auto s = generate(paper_like_profile(42));
    PreprocessConfig pre;
    pre.truncate["material_class"] = 4;
    pre.boxcox.insert("order_value");
    return prepare(s.schema, s.instances, pre, 2000);
  }();
  return p;
}

// Matrix cells on one worker (serial reference loop) versus all workers.
void BM_MatrixCells(benchmark::State& state) {
  const auto& p = paper_stream();
  MatrixSpec spec;
  spec.detectors = {DetectorConfig{DetectorKind::page_hinkley, {}, {}}, DetectorConfig{DetectorKind::adwin, {}, {}}};
  spec.batch_sizes = {500, 5000};
  ExperimentConfig base;
  base.keep_records = false;
  for (auto _ : state) benchmark::DoNotOptimize(experiment_matrix(p, base, spec, static_cast<int>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_BoxCoxLoglikSerial)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_BoxCoxLoglikOmp)->Arg(10000)->Arg(1000000);
BENCHMARK(BM_RollingMeanSerial)->Arg(10)->Arg(1000);
BENCHMARK(BM_RollingMeanOmp)->Arg(10)->Arg(1000);
BENCHMARK(BM_PredictBatchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PredictBatchOmp)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MatrixCells)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->Iterations(2);

BENCHMARK_MAIN();
