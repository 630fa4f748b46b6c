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

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "driftstream/kernels.hpp"
#include "driftstream/naive_bayes.hpp"
#include "driftstream/rng.hpp"
#include "oracles.hpp"

using namespace driftstream;

TEST_SUITE("kernels") {
  TEST_CASE("Box-Cox likelihood: serial, parallel and oracle agree") {
    Rng rng(1);
    for (std::size_t n : {10u, 63u, 64u, 65u, 1000u, 100003u}) {
      std::vector<double> x(n);
      for (auto& v : x) v = std::exp(rng.normal());
      for (double l : {-1.5, 0.0, 0.4, 2.0}) {
        const double s = kernels::serial::boxcox_loglik(x, l);
        const double p = kernels::omp::boxcox_loglik(x, l);
        CHECK(p == doctest::Approx(s).epsilon(1e-10));
        CHECK(s == doctest::Approx(oracle::boxcox_loglik(x, l)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("parallel reductions do not depend on the thread count") {
    Rng rng(2);
    std::vector<double> x(50000);
    for (auto& v : x) v = 0.5 + rng.uniform();
    const double reference = kernels::omp::boxcox_loglik(x, 0.3);
    for (int i = 0; i < 5; ++i) CHECK(kernels::omp::boxcox_loglik(x, 0.3) == reference);
  }

  TEST_CASE("rolling mean: sliding version equals the literal definition") {
    Rng rng(3);
    for (std::size_t n : {0u, 1u, 5u, 64u, 1000u, 20011u})
      for (std::size_t w : {1u, 2u, 7u, 1000u, 30000u}) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.normal();
        const auto a = kernels::serial::rolling_mean(x, w);
        const auto b = kernels::omp::rolling_mean(x, w);
        REQUIRE(a.size() == n);
        REQUIRE(b.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9).scale(1.0));
      }
  }

  TEST_CASE("batch prediction agrees with per-instance prediction") {
    const NbLayout layout{{5, 4}, 2, 3};
    Rng rng(4);
    std::vector<EncodedLabeled> train;
    for (int i = 0; i < 300; ++i)
      train.push_back({{i, {int(rng.below(5)), int(rng.below(4))}, {rng.normal(), rng.normal()}}, {int(rng.below(3))}});
    const auto model = NaiveBayes::fit(layout, train);
    std::vector<EncodedInstance> probes;
    for (int i = 0; i < 2000; ++i) probes.push_back({i, {int(rng.below(5)), int(rng.below(4))}, {rng.normal(), rng.normal()}});
    const auto a = kernels::serial::predict_batch(model, probes);
    const auto b = kernels::omp::predict_batch(model, probes);
    CHECK(a == b);
    for (std::size_t i = 0; i < probes.size(); ++i) CHECK(a[i] == model.predict_label(probes[i]).id);
  }

  TEST_CASE("for_each_cell visits every cell once and rethrows failures") {
    for (int workers : {0, 1, 3}) {
      std::vector<std::atomic<int>> hits(100);
      kernels::omp::for_each_cell(hits.size(), [&](std::size_t i) { ++hits[i]; }, workers);
      for (auto& h : hits) CHECK(h.load() == 1);
    }
    std::vector<int> order;
    kernels::serial::for_each_cell(4, [&](std::size_t i) { order.push_back(int(i)); });
    CHECK(order == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(kernels::omp::for_each_cell(
                        10, [](std::size_t i) { if (i == 7) throw std::runtime_error("boom"); }, 2),
                    std::runtime_error);
  }
}
