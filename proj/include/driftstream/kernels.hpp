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

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace driftstream {
class NaiveBayes;
struct EncodedInstance;
}  // namespace driftstream

// Data-parallel kernels. Each kernel has a straightforward serial reference
// used by the tests and the benchmark, and an OpenMP version used by the
// library. Reductions in the OpenMP versions split the input into a fixed
// number of chunks and combine partials in chunk order, so results do not
// depend on the thread count.
namespace driftstream::kernels {

inline constexpr std::size_t kReductionChunks = 64;

namespace serial {

// Box-Cox profile log-likelihood of already-shifted positive values:
//   -n/2 * ln(var(y)) + (lambda - 1) * sum(ln x),  var with divisor n.
double boxcox_loglik(std::span<const double> shifted, double lambda);

// output[i] = mean(series[max(0, i-window+1) ..= i]), computed literally.
std::vector<double> rolling_mean(std::span<const double> series, std::size_t window);

std::vector<int> predict_batch(const NaiveBayes& model, std::span<const EncodedInstance> probes);

void for_each_cell(std::size_t n_cells, const std::function<void(std::size_t)>& body);

}  // namespace serial

namespace omp {

double boxcox_loglik(std::span<const double> shifted, double lambda);

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window);

std::vector<int> predict_batch(const NaiveBayes& model, std::span<const EncodedInstance> probes);

// Runs body(i) for every cell on up to `workers` threads (0 = all available).
// The first exception thrown by any cell is rethrown after the loop.
void for_each_cell(std::size_t n_cells, const std::function<void(std::size_t)>& body,
                   int workers = 0);

}  // namespace omp

}  // namespace driftstream::kernels
