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
#include "driftstream/naive_bayes.hpp"
#include "driftstream/rng.hpp"
#include "oracles.hpp"

using namespace driftstream;

namespace {

EncodedLabeled item(std::vector<std::int32_t> cats, std::vector<double> nums, int y, std::int64_t index = 0) {
  return {{index, std::move(cats), std::move(nums)}, {y}};
}

oracle::Row as_row(const EncodedLabeled& e) {
  return {{e.x.categories.begin(), e.x.categories.end()}, e.x.numerics, e.y.id};
}

std::vector<EncodedLabeled> random_items(Rng& rng, const NbLayout& layout, std::size_t n) {
  std::vector<EncodedLabeled> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(layout.n_classes)));
    std::vector<std::int32_t> cats;
    for (int card : layout.cardinalities)
      cats.push_back(static_cast<std::int32_t>((rng.below(static_cast<std::uint64_t>(card)) + y) % card));
    std::vector<double> nums;
    for (std::size_t f = 0; f < layout.n_numeric; ++f) nums.push_back(y * 0.7 + rng.normal());
    out.push_back(item(std::move(cats), std::move(nums), y, static_cast<std::int64_t>(i)));
  }
  return out;
}

}  // namespace

TEST_SUITE("nb_classifier") {
  TEST_CASE("single-class training always predicts that class") {
    const NbLayout layout{{3}, 1, 3};
    Rng rng(1);
    std::vector<EncodedLabeled> train;
    for (int i = 0; i < 20; ++i) train.push_back(item({static_cast<int>(rng.below(3))}, {rng.normal()}, 0));
    const auto model = NaiveBayes::fit(layout, train);
    for (int i = 0; i < 50; ++i)
      CHECK(model.predict_label({0, {static_cast<int>(rng.below(3))}, {10.0 * rng.normal()}}).id == 0);
  }

  TEST_CASE("smoothed posterior of the three-instance example") {
    const NbLayout layout{{2}, 0, 2};
    std::vector<EncodedLabeled> train{item({0}, {}, 0), item({0}, {}, 0), item({1}, {}, 1)};
    const auto model = NaiveBayes::fit(layout, train);
    const auto pred = model.predict({0, {0}, {}});
    CHECK(pred.label.id == 0);
    CHECK(pred.log_scores[0] == doctest::Approx(std::log(2.0 / 3.0 * 3.0 / 4.0)));
    CHECK(pred.log_scores[1] == doctest::Approx(std::log(1.0 / 3.0 * 1.0 / 3.0)));
    const auto post = model.posterior({0, {0}, {}});
    CHECK(post[0] == doctest::Approx(0.5 / (0.5 + 1.0 / 9.0)));
    std::vector<oracle::Row> rows;
    for (const auto& t : train) rows.push_back(as_row(t));
    const auto ref = oracle::nb_posterior(rows, layout.cardinalities, 2, {{0}, {}, 0});
    CHECK(post[0] == doctest::Approx(ref[0]).epsilon(1e-12));
  }

  TEST_CASE("posterior agrees with brute force on random data") {
    const NbLayout layout{{4, 3, 6}, 2, 3};
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
      const auto train = random_items(rng, layout, 5 + rng.below(60));
      const auto model = NaiveBayes::fit(layout, train);
      std::vector<oracle::Row> rows;
      for (const auto& t : train) rows.push_back(as_row(t));
      for (const auto& probe : random_items(rng, layout, 10)) {
        const auto got = model.posterior(probe.x);
        const auto ref = oracle::nb_posterior(rows, layout.cardinalities, 3, as_row(probe));
        for (int c = 0; c < 3; ++c) CHECK(got[c] == doctest::Approx(ref[c]).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("classes absent from training get a smoothed prior") {
    const NbLayout layout{{2}, 0, 3};
    const auto model = NaiveBayes::fit(layout, std::vector<EncodedLabeled>{item({0}, {}, 0), item({1}, {}, 1)});
    CHECK(std::exp(model.log_prior(2)) == doctest::Approx(1.0 / 5.0));
    CHECK(std::exp(model.log_prior(0)) == doctest::Approx(0.5));
  }

  TEST_CASE("update with an empty batch is a no-op") {
    const NbLayout layout{{3}, 1, 2};
    Rng rng(3);
    const auto train = random_items(rng, layout, 30);
    auto model = NaiveBayes::fit(layout, train);
    const auto before = model;
    model.update(std::span<const EncodedLabeled>{});
    CHECK(model == before);
  }

  TEST_CASE("Welford textbook values and chunking") {
    Welford w;
    for (double x : {1.0, 2.0, 3.0}) w.push(x);
    CHECK(w.mean == 2.0);
    CHECK(w.variance(1e-9) == doctest::Approx(1.0));
    const NbLayout layout{{}, 1, 2};
    auto one = NaiveBayes::fit(layout, std::vector<EncodedLabeled>{item({}, {1}, 0), item({}, {2}, 0), item({}, {3}, 0)});
    auto two = NaiveBayes::fit(layout, std::vector<EncodedLabeled>{item({}, {1}, 0), item({}, {2}, 0)});
    two.update(item({}, {3}, 0));
    CHECK(std::abs(one.gaussian(0, 0).mean - two.gaussian(0, 0).mean) <= 1e-12);
    CHECK(std::abs(one.gaussian(0, 0).m2 - two.gaussian(0, 0).m2) <= 1e-12);
    CHECK(one.gaussian(0, 0).count == two.gaussian(0, 0).count);
    Welford single;
    single.push(5.0);
    CHECK(single.variance(1e-9) == 1e-9);
  }

  TEST_CASE("fit(A ++ B) equals update(fit(A), B)") {
    const NbLayout layout{{5, 3}, 2, 3};
    Rng rng(42);
    const auto all = random_items(rng, layout, 1000);
    for (std::size_t split : {1u, 10u, 500u, 999u}) {
      const std::span<const EncodedLabeled> a(all.data(), split), b(all.data() + split, all.size() - split);
      auto incremental = NaiveBayes::fit(layout, a);
      incremental.update(b);
      const auto batch = NaiveBayes::fit(layout, all);
      CHECK(incremental.total() == batch.total());
      for (int c = 0; c < 3; ++c) {
        CHECK(incremental.class_count(c) == batch.class_count(c));
        for (std::size_t f = 0; f < 2; ++f)
          for (int k = 0; k < layout.cardinalities[f]; ++k)
            CHECK(incremental.category_count(f, c, k) == batch.category_count(f, c, k));
        for (std::size_t f = 0; f < 2; ++f) {
          CHECK(std::abs(incremental.gaussian(f, c).mean - batch.gaussian(f, c).mean) <= 1e-9);
          CHECK(std::abs(incremental.gaussian(f, c).m2 - batch.gaussian(f, c).m2) <= 1e-9);
        }
      }
    }
  }

  TEST_CASE("count invariants") {
    const NbLayout layout{{4, 2}, 1, 3};
    Rng rng(9);
    const auto model = NaiveBayes::fit(layout, random_items(rng, layout, 300));
    std::int64_t sum = 0;
    for (int c = 0; c < 3; ++c) {
      sum += model.class_count(c);
      for (std::size_t f = 0; f < 2; ++f) {
        std::int64_t s = 0;
        for (int k = 0; k < layout.cardinalities[f]; ++k) s += model.category_count(f, c, k);
        CHECK(s == model.class_count(c));
      }
      CHECK(model.gaussian(0, c).m2 >= 0.0);
    }
    CHECK(sum == model.total());
  }

  TEST_CASE("ties go to the lowest class id") {
    const NbLayout layout{{2}, 1, 3};
    const auto model = NaiveBayes::fit(
        layout, std::vector<EncodedLabeled>{item({0}, {1.0}, 0), item({0}, {1.0}, 1), item({0}, {1.0}, 2)});
    const auto pred = model.predict({0, {0}, {1.0}});
    CHECK(pred.log_scores[0] == pred.log_scores[1]);
    CHECK(pred.label.id == 0);
  }

  TEST_CASE("unseen category on a balanced two-class model") {
    const NbLayout layout{{3}, 0, 2};
    const auto model = NaiveBayes::fit(layout, std::vector<EncodedLabeled>{item({0}, {}, 0), item({1}, {}, 1)});
    const auto post = model.posterior({0, {2}, {}});
    CHECK(post[0] == doctest::Approx(0.5));
    CHECK(post[1] == doctest::Approx(0.5));
    CHECK(model.predict_label({0, {2}, {}}).id == 0);
  }

  TEST_CASE("duplicating the training data keeps the decisions in the large-count regime") {
    const NbLayout layout{{4, 3}, 1, 3};
    Rng rng(2026);
    const auto train = random_items(rng, layout, 3000);
    auto doubled = train;
    doubled.insert(doubled.end(), train.begin(), train.end());
    const auto a = NaiveBayes::fit(layout, train), b = NaiveBayes::fit(layout, doubled);
    int same = 0;
    const auto probes = random_items(rng, layout, 500);
    for (const auto& p : probes) same += a.predict_label(p.x) == b.predict_label(p.x);
    CHECK(same == 500);
  }

  TEST_CASE("errors") {
    const NbLayout layout{{2}, 1, 2};
    CHECK_THROWS_AS(NaiveBayes::fit(layout, std::span<const EncodedLabeled>{}), ConfigError);
    NaiveBayes model(layout);
    CHECK_THROWS_AS(model.predict({0, {0}, {0.0}}), std::logic_error);
    CHECK_THROWS_AS(model.update(item({0}, {0.0}, 2)), DomainError);
    CHECK_THROWS_AS(model.update(item({5}, {0.0}, 0)), DomainError);
  }

  TEST_CASE("json round trip") {
    const NbLayout layout{{3, 2}, 2, 3};
    Rng rng(4);
    const auto model = NaiveBayes::fit(layout, random_items(rng, layout, 200));
    const auto back = NaiveBayes::from_json(model.to_json());
    CHECK(back == model);
    for (const auto& p : random_items(rng, layout, 50)) CHECK(back.predict(p.x).log_scores == model.predict(p.x).log_scores);
  }
}
