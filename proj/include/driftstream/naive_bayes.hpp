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

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "driftstream/preprocess.hpp"

namespace driftstream {

// Running (count, mean, M2) by Welford's update.
struct Welford {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  // Sample variance floored at `floor`; `floor` itself below two samples.
  double variance(double floor) const {
    if (count < 2) return floor;
    const double v = m2 / static_cast<double>(count - 1);
    return v > floor ? v : floor;
  }
  friend bool operator==(const Welford&, const Welford&) = default;
};

// Dimensions of the encoded feature space.
struct NbLayout {
  std::vector<int> cardinalities;  // per categorical feature, incl. unseen slot
  std::size_t n_numeric = 0;
  int n_classes = 3;
  friend bool operator==(const NbLayout&, const NbLayout&) = default;
};

struct NbParams {
  double alpha = 1.0;      // Laplace smoothing
  double var_floor = 1e-9;
  friend bool operator==(const NbParams&, const NbParams&) = default;
};

struct NbPrediction {
  ClassLabel label;
  std::vector<double> log_scores;  // unnormalised, one per class
};

// Multi-class naive Bayes over category indices (multinomial per feature)
// and Gaussian numerics. Supports from-scratch fitting and appending updates;
// update(fit(A), B) reaches the same state as fit(A ++ B).
class NaiveBayes {
 public:
  NaiveBayes(NbLayout layout, NbParams params = {});

  // Throws ConfigError on an empty training list.
  static NaiveBayes fit(const NbLayout& layout, std::span<const EncodedLabeled> instances,
                        NbParams params = {});

  void update(std::span<const EncodedLabeled> batch);
  void update(const EncodedLabeled& item);
  // Drops all counts, keeping layout and parameters.
  void clear();

  // Log-space scores; ties go to the lowest class id.
  NbPrediction predict(const EncodedInstance& x) const;
  ClassLabel predict_label(const EncodedInstance& x) const;
  // Normalised posterior via max-subtraction.
  std::vector<double> posterior(const EncodedInstance& x) const;

  std::int64_t total() const { return total_; }
  std::int64_t class_count(int c) const { return class_counts_[static_cast<std::size_t>(c)]; }
  std::int64_t category_count(std::size_t feature, int c, int category) const;
  const Welford& gaussian(std::size_t feature, int c) const;
  double log_prior(int c) const;
  const NbLayout& layout() const { return layout_; }
  const NbParams& params() const { return params_; }

  nlohmann::json to_json() const;
  static NaiveBayes from_json(const nlohmann::json& doc);

  friend bool operator==(const NaiveBayes&, const NaiveBayes&) = default;

 private:
  void check(const EncodedLabeled& item) const;
  double log_scores_into(const EncodedInstance& x, double* scores) const;

  NbLayout layout_;
  NbParams params_;
  std::int64_t total_ = 0;
  std::vector<std::int64_t> class_counts_;
  std::vector<std::size_t> offsets_;       // start of each feature block in counts_
  std::vector<std::int64_t> counts_;       // [feature][class][category]
  std::vector<Welford> gauss_;             // [feature][class]
};

inline constexpr int kModelJsonVersion = 1;

}  // namespace driftstream
