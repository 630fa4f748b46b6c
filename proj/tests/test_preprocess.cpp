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

#include <cmath>

#include "driftstream/error.hpp"
#include "driftstream/preprocess.hpp"
#include "driftstream/rng.hpp"
#include "oracles.hpp"

using namespace driftstream;

namespace {

FeatureSchema mixed_schema() {
  FeatureSchema s;
  s.features = {{"material", FeatureKind::categorical}, {"value", FeatureKind::numeric}};
  return s;
}

Instance row(std::string cat, double v, std::int64_t index = 0) { return {index, {std::move(cat), v}}; }

}  // namespace

TEST_SUITE("preprocess") {
  TEST_CASE("truncate_category") {
    CHECK(truncate_category("10234567", 4) == "1023");
    CHECK(truncate_category("ab", 4) == "ab");
    CHECK(truncate_category("", 4) == "");
    CHECK_THROWS_AS(truncate_category("abc", 0), ConfigError);
  }

  TEST_CASE("apply_boxcox worked values") {
    CHECK(apply_boxcox(4.0, {0.5, 0.0}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(apply_boxcox(std::exp(1.0), {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    for (double l : {-5.0, -1.0, -0.3, 0.0, 0.7, 2.0, 5.0}) CHECK(apply_boxcox(1.0, {l, 0.0}) == 0.0);
    CHECK(apply_boxcox(0.0, {1.0, 1.0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(apply_boxcox(-1.0, {0.5, 0.0}), DomainError);
    CHECK_THROWS_AS(apply_boxcox(0.0, {0.5, 0.0}), DomainError);
  }

  TEST_CASE("Box-Cox round trip on well-conditioned inputs") {
    for (double l = -2.0; l <= 2.0001; l += 0.25)
      for (double x : {0.5, 1.0, 2.0, 3.7, 10.0}) {
        const BoxCoxParams p{l, 0.0};
        CHECK(invert_boxcox(apply_boxcox(x, p), p) == doctest::Approx(x).epsilon(1e-12));
      }
    const BoxCoxParams shifted{0.3, 2.5};
    CHECK(invert_boxcox(apply_boxcox(-1.0, shifted), shifted) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("log-normal data fits lambda near 0, matching a likelihood grid scan") {
    Rng rng(1234);
    std::vector<double> x(10000);
    for (auto& v : x) v = std::exp(rng.normal());
    const auto p = fit_boxcox(x);
    CHECK(p.shift == 0.0);
    CHECK(std::abs(p.lambda) <= 0.1);
    const double grid = oracle::boxcox_grid_argmax(x, -1.0, 1.0, 0.001);
    CHECK(std::abs(p.lambda - grid) < 2e-3);
    CHECK(boxcox_loglik(x, p) >= oracle::boxcox_loglik(x, grid) - 1e-6);
  }

  TEST_CASE("Gaussian positive data fits lambda near 1") {
    Rng rng(99);
    std::vector<double> x(10000);
    for (auto& v : x) v = 100.0 + 5.0 * rng.normal();
    const auto p = fit_boxcox(x);
    CHECK(std::abs(p.lambda - 1.0) <= 0.3);
    const double grid = oracle::boxcox_grid_argmax(x, -5.0, 5.0, 0.01);
    CHECK(std::abs(p.lambda - grid) < 0.02);
  }

  TEST_CASE("likelihood agrees with the two-pass oracle") {
    Rng rng(5);
    std::vector<double> x(1000);
    for (auto& v : x) v = 0.1 + rng.uniform() * 50.0;
    for (double l : {-2.0, -0.5, 0.0, 0.5, 1.0, 3.0})
      CHECK(boxcox_loglik(x, {l, 0.0}) == doctest::Approx(oracle::boxcox_loglik(x, l)).epsilon(1e-9));
  }

  TEST_CASE("zeros force the positivity shift") {
    std::vector<double> x{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto p = fit_boxcox(x);
    CHECK(p.shift == kBoxCoxShiftEpsilon);
    std::vector<double> neg{-3, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(fit_boxcox(neg).shift == doctest::Approx(3.0 + kBoxCoxShiftEpsilon));
  }

  TEST_CASE("degenerate Box-Cox inputs") {
    CHECK_THROWS_AS(fit_boxcox(std::vector<double>{1, 2, 3}), DomainError);
    CHECK_THROWS_AS(fit_boxcox(std::vector<double>(20, 4.0)), DomainError);
  }

  TEST_CASE("fixed day bins") {
    const auto bins = fit_target_bins({}, BinMode::fixed_days);
    CHECK(bins.upper_edges == std::vector<double>{6.0, 39.0});
    CHECK(bin_target(100.0, bins).id == 0);
    CHECK(bin_target(936.0, bins).id == 1);
    CHECK(bin_target(960.0, bins).id == 2);
    CHECK(bin_target(0.0, bins).id == 0);
    CHECK(bin_target(167.9, bins).id == 0);
    CHECK(bin_target(168.0, bins).id == 1);
    CHECK(bin_target(959.99, bins).id == 1);
    CHECK_THROWS_AS(bin_target(-1.0, bins), DomainError);
    CHECK_THROWS_AS(fit_target_bins({}, BinMode::fixed_days, {39.0, 6.0}), ConfigError);
  }

  TEST_CASE("tertile bins on 1..9") {
    std::vector<double> v{9, 1, 8, 2, 7, 3, 6, 4, 5};
    const auto bins = fit_target_bins(v, BinMode::tertile);
    REQUIRE(bins.upper_edges.size() == 2);
    CHECK(bins.upper_edges[0] == doctest::Approx(oracle::quantile(v, 1.0 / 3.0)));
    CHECK(bins.upper_edges[1] == doctest::Approx(oracle::quantile(v, 2.0 / 3.0)));
    CHECK(bins.upper_edges[0] == doctest::Approx(11.0 / 3.0));
    CHECK(bins.upper_edges[1] == doctest::Approx(19.0 / 3.0));
  }

  TEST_CASE("tertile bins on tied values are degenerate") {
    CHECK_THROWS_AS(fit_target_bins(std::vector<double>{5, 5, 5}, BinMode::tertile), DomainError);
    CHECK_THROWS_AS(fit_target_bins(std::vector<double>{5, 5}, BinMode::tertile), DomainError);
  }

  TEST_CASE("tertile bins split uniform data evenly") {
    Rng rng(2024);
    std::vector<double> v(9999);
    for (auto& x : v) x = 1000.0 * rng.uniform();
    const auto bins = fit_target_bins(v, BinMode::tertile);
    std::vector<int> count(3, 0);
    for (double x : v) ++count[bin_target(x, bins).id];
    for (int c : count) CHECK(std::abs(c - 3333) <= 1);
  }

  TEST_CASE("quantile matches the oracle on random samples") {
    Rng rng(8);
    for (int n : {1, 2, 5, 17, 100}) {
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      std::vector<double> sorted = v;
      std::sort(sorted.begin(), sorted.end());
      for (double p : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0})
        CHECK(interpolated_quantile(sorted, p) == doctest::Approx(oracle::quantile(v, p)).epsilon(1e-14));
    }
  }

  TEST_CASE("encoder maps, unseen index and truncation") {
    PreprocessConfig cfg;
    cfg.truncate["material"] = 4;
    std::vector<Instance> warm{row("A", 1.0), row("B", 2.0), row("A", 3.0), row("10234567", 4.0)};
    const auto enc = Encoder::fit(mixed_schema(), warm, cfg);
    CHECK(enc.encode(row("A", 0.0)).categories[0] == 0);
    CHECK(enc.encode(row("B", 0.0)).categories[0] == 1);
    CHECK(enc.encode(row("C", 0.0)).categories[0] == 3);
    CHECK(enc.encode(row("10239999", 0.0)).categories[0] == 2);
    CHECK(enc.unseen_index(0) == 3);
    CHECK(enc.cardinalities() == std::vector<int>{4});
    CHECK(enc.encode(row("A", 7.5)).numerics[0] == 7.5);
    CHECK(enc.encode(row("A", 0.0, 42)).index == 42);
  }

  TEST_CASE("encoder applies Box-Cox") {
    PreprocessConfig cfg;
    cfg.boxcox.insert("value");
    std::vector<Instance> warm;
    Rng rng(3);
    for (int i = 0; i < 500; ++i) warm.push_back(row("A", std::exp(rng.normal())));
    auto enc = Encoder::fit(mixed_schema(), warm, cfg);
    const auto& p = enc.boxcox_params(0);
    REQUIRE(p);
    CHECK(enc.encode(row("A", 4.0)).numerics[0] == doctest::Approx(apply_boxcox(4.0, *p)));
    // Below the fitted support the value is clamped to the positivity floor.
    CHECK(std::isfinite(enc.encode(row("A", -10.0)).numerics[0]));
  }

  TEST_CASE("encoded slot for x = 4 with lambda 0.5") {
    const BoxCoxParams p{0.5, 0.0};
    CHECK(apply_boxcox(4.0, p) == doctest::Approx(2.0));
  }

  TEST_CASE("frozen encoder never changes") {
    auto enc = Encoder::fit(mixed_schema(), std::vector<Instance>{row("A", 1.0)}, {});
    CHECK(enc.frozen());
    CHECK_THROWS_AS(enc.observe(row("Z", 1.0)), std::logic_error);
    enc.encode(row("Q", 1.0));
    CHECK(enc.cardinalities() == std::vector<int>{2});
    Encoder fresh(mixed_schema(), {});
    CHECK_THROWS_AS(fresh.encode(row("A", 1.0)), std::logic_error);
  }

  TEST_CASE("encoder config errors") {
    PreprocessConfig bad;
    bad.boxcox.insert("material");
    CHECK_THROWS_AS(Encoder(mixed_schema(), bad), ConfigError);
    PreprocessConfig bad2;
    bad2.truncate["value"] = 3;
    CHECK_THROWS_AS(Encoder(mixed_schema(), bad2), ConfigError);
    PreprocessConfig bad3;
    bad3.truncate["material"] = 0;
    CHECK_THROWS_AS(Encoder(mixed_schema(), bad3), ConfigError);
  }

  TEST_CASE("one-hot export view") {
    auto enc = Encoder::fit(mixed_schema(), std::vector<Instance>{row("A", 1.0), row("B", 2.0)}, {});
    CHECK(enc.one_hot(enc.encode(row("B", 5.0))) == std::vector<double>{0, 1, 0, 5});
    CHECK(enc.one_hot(enc.encode(row("X", 6.0))) == std::vector<double>{0, 0, 1, 6});
  }

  TEST_CASE("encoder json round trip") {
    PreprocessConfig cfg;
    cfg.boxcox.insert("value");
    cfg.truncate["material"] = 2;
    std::vector<Instance> warm;
    for (int i = 0; i < 30; ++i) warm.push_back(row("M" + std::to_string(i % 7), 1.0 + i));
    auto enc = Encoder::fit(mixed_schema(), warm, cfg);
    enc.set_target_bins(fit_target_bins({}, BinMode::fixed_days));
    const auto back = Encoder::from_json(enc.to_json());
    CHECK(back.to_json() == enc.to_json());
    for (const auto& w : warm) CHECK(back.encode(w) == enc.encode(w));
    CHECK(back.target_bins()->upper_edges == std::vector<double>{6.0, 39.0});
  }
}
