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
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>
#include "driftstream/stream.hpp"

namespace driftstream {

// Leading `prefix_len` characters; shorter values are returned unchanged.
std::string truncate_category(std::string_view value, std::size_t prefix_len);

struct BoxCoxParams {
  double lambda = 1.0;
  double shift = 0.0;  // added before transforming so all values are positive
};

inline constexpr double kBoxCoxShiftEpsilon = 1e-6;
inline constexpr double kBoxCoxLambdaMin = -5.0;
inline constexpr double kBoxCoxLambdaMax = 5.0;
inline constexpr double kBoxCoxTolerance = 1e-4;

// Maximum-likelihood lambda on [-5, 5] by golden-section search. Requires at
// least 10 values that are not all equal.
BoxCoxParams fit_boxcox(std::span<const double> values);
double boxcox_loglik(std::span<const double> values, const BoxCoxParams& params);
double apply_boxcox(double x, const BoxCoxParams& params);
double invert_boxcox(double y, const BoxCoxParams& params);

enum class BinMode { tertile, fixed_days };

// A value v is reduced to floor(v / unit_divisor) when `floor_units` is set,
// then labelled with the number of edges strictly below it.
struct BinBoundaries {
  std::vector<double> upper_edges;
  double unit_divisor = 1.0;
  bool floor_units = false;
  int num_classes() const { return static_cast<int>(upper_edges.size()) + 1; }
};

// Tertile edges from the sample (linear-interpolation quantiles), or the
// given day edges (default {6, 39}) applied to whole days of 24 hours.
BinBoundaries fit_target_bins(std::span<const double> throughput_hours, BinMode mode,
                              std::vector<double> day_edges = {6.0, 39.0});
ClassLabel bin_target(double hours, const BinBoundaries& bins);

// Linear-interpolation sample quantile of a sorted sample.
double interpolated_quantile(std::span<const double> sorted, double p);

struct PreprocessConfig {
  std::map<std::string, std::size_t> truncate;  // categorical feature -> prefix length
  std::set<std::string> boxcox;                 // numeric features to transform
};

// Encoded form consumed by the classifier: category indices and transformed
// numerics, each in schema order of their kind.
struct EncodedInstance {
  std::int64_t index = 0;
  std::vector<std::int32_t> categories;
  std::vector<double> numerics;
  friend bool operator==(const EncodedInstance&, const EncodedInstance&) = default;
};

struct EncodedLabeled {
  EncodedInstance x;
  ClassLabel y;
};

// Category maps and Box-Cox parameters. Learns from observed instances until
// frozen; afterwards the maps never change and unseen categories share the
// reserved index |seen|.
class Encoder {
 public:
  Encoder(FeatureSchema schema, PreprocessConfig config);

  void observe(const Instance& instance);
  void freeze();
  bool frozen() const { return frozen_; }

  // Requires a frozen encoder.
  EncodedInstance encode(const Instance& instance) const;
  EncodedLabeled encode(const LabeledInstance& li) const;
  // One-hot expansion (categorical slots incl. unseen, then numerics).
  std::vector<double> one_hot(const EncodedInstance& encoded) const;

  // Per categorical feature: seen categories + 1 unseen slot.
  std::vector<int> cardinalities() const;
  std::int32_t unseen_index(std::size_t categorical_feature) const;
  const std::optional<BoxCoxParams>& boxcox_params(std::size_t numeric_feature) const;
  const FeatureSchema& schema() const { return schema_; }

  // Target binning travels with the encoder so a run is fully auditable.
  void set_target_bins(BinBoundaries bins) { target_bins_ = std::move(bins); }
  const std::optional<BinBoundaries>& target_bins() const { return target_bins_; }

  nlohmann::json to_json() const;
  static Encoder from_json(const nlohmann::json& doc);

  // Fits and freezes on the given instances.
  static Encoder fit(const FeatureSchema& schema, std::span<const Instance> warmup,
                     const PreprocessConfig& config);

 private:
  std::string categorical_token(std::size_t feature, const Instance& instance) const;

  FeatureSchema schema_;
  PreprocessConfig config_;
  bool frozen_ = false;
  std::vector<std::size_t> categorical_slots_;  // schema positions
  std::vector<std::size_t> numeric_slots_;
  std::vector<std::size_t> prefix_len_;         // per categorical feature; 0 = keep
  std::vector<std::unordered_map<std::string, std::int32_t>> maps_;
  std::vector<std::vector<std::string>> categories_;  // index -> token
  std::vector<std::optional<BoxCoxParams>> boxcox_;
  std::vector<std::vector<double>> boxcox_samples_;
  std::optional<BinBoundaries> target_bins_;
};

inline constexpr int kEncoderJsonVersion = 1;

nlohmann::json bins_to_json(const BinBoundaries& bins);
BinBoundaries bins_from_json(const nlohmann::json& doc);

}  // namespace driftstream
