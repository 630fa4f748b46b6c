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

#include <omp.h>

#include <array>
#include <cmath>
#include <exception>
#include <mutex>

#include "driftstream/kernels.hpp"
#include "driftstream/naive_bayes.hpp"

namespace driftstream::kernels::omp {

namespace {

struct Chunk {
  std::size_t begin, end;
};

Chunk chunk_bounds(std::size_t n, std::size_t c) {
  return {n * c / kReductionChunks, n * (c + 1) / kReductionChunks};
}

inline double transform(double lx, double lambda, bool use_log) {
  return use_log ? lx : std::expm1(lambda * lx) / lambda;
}

}  // namespace

double boxcox_loglik(std::span<const double> shifted, double lambda) {
  const std::size_t n = shifted.size();
  const bool use_log = std::abs(lambda) <= 1e-8;
  std::array<double, kReductionChunks> part_y{}, part_log{}, part_ss{};

#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [b, e] = chunk_bounds(n, c);
    double sy = 0.0, sl = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double lx = std::log(shifted[i]);
      sl += lx;
      sy += transform(lx, lambda, use_log);
    }
    part_y[c] = sy;
    part_log[c] = sl;
  }
  double sum_y = 0.0, sum_log = 0.0;
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    sum_y += part_y[c];
    sum_log += part_log[c];
  }
  const double mean = sum_y / static_cast<double>(n);

#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [b, e] = chunk_bounds(n, c);
    double ss = 0.0;
    for (std::size_t i = b; i < e; ++i) {
      const double d = transform(std::log(shifted[i]), lambda, use_log) - mean;
      ss += d * d;
    }
    part_ss[c] = ss;
  }
  double ss = 0.0;
  for (double p : part_ss) ss += p;
  const auto nd = static_cast<double>(n);
  return -0.5 * nd * std::log(ss / nd) + (lambda - 1.0) * sum_log;
}

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window) {
  const std::size_t n = series.size();
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (std::size_t c = 0; c < kReductionChunks; ++c) {
    const auto [b, e] = chunk_bounds(n, c);
    if (b == e) continue;
    // Seed the window ending at b directly, then slide.
    const std::size_t lo = b + 1 >= window ? b + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= b; ++j) sum += series[j];
    out[b] = sum / static_cast<double>(b - lo + 1);
    for (std::size_t i = b + 1; i < e; ++i) {
      sum += series[i];
      if (i >= window) sum -= series[i - window];
      const std::size_t len = i + 1 < window ? i + 1 : window;
      out[i] = sum / static_cast<double>(len);
    }
  }
  return out;
}

std::vector<int> predict_batch(const NaiveBayes& model, std::span<const EncodedInstance> probes) {
  std::vector<int> out(probes.size());
  const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = model.predict_label(probes[static_cast<std::size_t>(i)]).id;
  return out;
}

void for_each_cell(std::size_t n_cells, const std::function<void(std::size_t)>& body, int workers) {
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::ptrdiff_t>(n_cells);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace driftstream::kernels::omp
