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

#include <cmath>

#include "driftstream/kernels.hpp"
#include "driftstream/naive_bayes.hpp"

namespace driftstream::kernels::serial {

double boxcox_loglik(std::span<const double> shifted, double lambda) {
  const auto n = static_cast<double>(shifted.size());
  const bool use_log = std::abs(lambda) <= 1e-8;
  double sum_y = 0.0, sum_log = 0.0;
  for (double x : shifted) {
    const double lx = std::log(x);
    sum_log += lx;
    sum_y += use_log ? lx : std::expm1(lambda * lx) / lambda;
  }
  const double mean = sum_y / n;
  double ss = 0.0;
  for (double x : shifted) {
    const double lx = std::log(x);
    const double d = (use_log ? lx : std::expm1(lambda * lx) / lambda) - mean;
    ss += d * d;
  }
  return -0.5 * n * std::log(ss / n) + (lambda - 1.0) * sum_log;
}

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window) {
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t lo = i + 1 >= window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::vector<int> predict_batch(const NaiveBayes& model, std::span<const EncodedInstance> probes) {
  std::vector<int> out(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) out[i] = model.predict_label(probes[i]).id;
  return out;
}

void for_each_cell(std::size_t n_cells, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n_cells; ++i) body(i);
}

}  // namespace driftstream::kernels::serial
