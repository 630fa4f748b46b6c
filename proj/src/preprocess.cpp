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

#include "driftstream/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftstream/error.hpp"
#include "driftstream/kernels.hpp"

namespace driftstream {

std::string truncate_category(std::string_view value, std::size_t prefix_len) {
  if (prefix_len == 0) throw ConfigError("prefix length must be >= 1");
  return std::string(value.substr(0, prefix_len));
}

double boxcox_loglik(std::span<const double> values, const BoxCoxParams& params) {
  std::vector<double> shifted(values.begin(), values.end());
  for (auto& v : shifted) {
    v += params.shift;
    if (!(v > 0.0)) throw DomainError("Box-Cox requires x + shift > 0");
  }
  return kernels::omp::boxcox_loglik(shifted, params.lambda);
}

BoxCoxParams fit_boxcox(std::span<const double> values) {
  if (values.size() < 10) throw DomainError("Box-Cox fit needs at least 10 values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!std::isfinite(*lo) || !std::isfinite(*hi)) throw DomainError("Box-Cox fit needs finite values");
  if (*lo == *hi) throw DomainError("Box-Cox fit on degenerate input: all values equal");

  BoxCoxParams params;
  params.shift = std::max(0.0, kBoxCoxShiftEpsilon - *lo);
  std::vector<double> shifted(values.begin(), values.end());
  for (auto& v : shifted) v += params.shift;

  auto score = [&](double lambda) { return kernels::omp::boxcox_loglik(shifted, lambda); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = kBoxCoxLambdaMin, b = kBoxCoxLambdaMax;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = score(c), fd = score(d);
  while (b - a > kBoxCoxTolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score(d);
    }
  }
  params.lambda = 0.5 * (a + b);
  return params;
}

double apply_boxcox(double x, const BoxCoxParams& params) {
  const double v = x + params.shift;
  if (!(v > 0.0)) throw DomainError("Box-Cox requires x + shift > 0");
  if (std::abs(params.lambda) > 1e-8) return std::expm1(params.lambda * std::log(v)) / params.lambda;
  return std::log(v);
}

double invert_boxcox(double y, const BoxCoxParams& params) {
  if (std::abs(params.lambda) > 1e-8) {
    const double t = params.lambda * y;
    if (!(t > -1.0)) throw DomainError("value outside the Box-Cox image");
    return std::exp(std::log1p(t) / params.lambda) - params.shift;
  }
  return std::exp(y) - params.shift;
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

BinBoundaries fit_target_bins(std::span<const double> throughput_hours, BinMode mode,
                              std::vector<double> day_edges) {
  BinBoundaries bins;
  if (mode == BinMode::fixed_days) {
    if (day_edges.empty()) throw ConfigError("fixed_days binning needs at least one edge");
    for (std::size_t i = 1; i < day_edges.size(); ++i)
      if (!(day_edges[i] > day_edges[i - 1])) throw ConfigError("day edges must be strictly ascending");
    bins.upper_edges = std::move(day_edges);
    bins.unit_divisor = 24.0;
    bins.floor_units = true;
    return bins;
  }
  constexpr int k_classes = 3;
  if (throughput_hours.size() < static_cast<std::size_t>(k_classes))
    throw DomainError("tertile binning needs at least 3 values");
  std::vector<double> sorted(throughput_hours.begin(), throughput_hours.end());
  std::sort(sorted.begin(), sorted.end());
  bins.upper_edges = {interpolated_quantile(sorted, 1.0 / 3.0), interpolated_quantile(sorted, 2.0 / 3.0)};
  if (!(bins.upper_edges[1] > bins.upper_edges[0]))
    throw DomainError("degenerate target sample: tertile edges collapse");
  return bins;
}

ClassLabel bin_target(double hours, const BinBoundaries& bins) {
  if (!(hours >= 0.0)) throw DomainError("throughput time must be non-negative");
  const double v = bins.floor_units ? std::floor(hours / bins.unit_divisor) : hours;
  int label = 0;
  for (double edge : bins.upper_edges)
    if (edge < v) ++label;
  return ClassLabel{label};
}

// ---------------------------------------------------------------------------

Encoder::Encoder(FeatureSchema schema, PreprocessConfig config)
    : schema_(std::move(schema)), config_(std::move(config)) {
  schema_.validate();
  for (std::size_t i = 0; i < schema_.features.size(); ++i) {
    const auto& f = schema_.features[i];
    if (f.kind == FeatureKind::categorical) {
      categorical_slots_.push_back(i);
      auto it = config_.truncate.find(f.name);
      std::size_t len = 0;
      if (it != config_.truncate.end()) {
        if (it->second == 0) throw ConfigError("prefix length for '" + f.name + "' must be >= 1");
        len = it->second;
      }
      prefix_len_.push_back(len);
    } else {
      numeric_slots_.push_back(i);
    }
  }
  for (const auto& [name, len] : config_.truncate) {
    auto pos = schema_.find(name);
    if (!pos || schema_.features[*pos].kind != FeatureKind::categorical)
      throw ConfigError("truncate target '" + name + "' is not a categorical feature");
  }
  for (const auto& name : config_.boxcox) {
    auto pos = schema_.find(name);
    if (!pos || schema_.features[*pos].kind != FeatureKind::numeric)
      throw ConfigError("Box-Cox target '" + name + "' is not a numeric feature");
  }
  maps_.resize(categorical_slots_.size());
  categories_.resize(categorical_slots_.size());
  boxcox_.resize(numeric_slots_.size());
  boxcox_samples_.resize(numeric_slots_.size());
}

std::string Encoder::categorical_token(std::size_t feature, const Instance& instance) const {
  const auto& value = std::get<std::string>(instance.values.at(categorical_slots_[feature]));
  return prefix_len_[feature] ? truncate_category(value, prefix_len_[feature]) : value;
}

void Encoder::observe(const Instance& instance) {
  if (frozen_) throw std::logic_error("encoder is frozen");
  if (instance.values.size() != schema_.features.size())
    throw SchemaError("instance has " + std::to_string(instance.values.size()) + " values, schema has " +
                      std::to_string(schema_.features.size()));
  for (std::size_t f = 0; f < categorical_slots_.size(); ++f) {
    std::string token = categorical_token(f, instance);
    if (!maps_[f].count(token)) {
      maps_[f].emplace(token, static_cast<std::int32_t>(categories_[f].size()));
      categories_[f].push_back(std::move(token));
    }
  }
  for (std::size_t f = 0; f < numeric_slots_.size(); ++f)
    if (config_.boxcox.count(schema_.features[numeric_slots_[f]].name))
      boxcox_samples_[f].push_back(std::get<double>(instance.values[numeric_slots_[f]]));
}

void Encoder::freeze() {
  if (frozen_) return;
  for (std::size_t f = 0; f < numeric_slots_.size(); ++f) {
    if (config_.boxcox.count(schema_.features[numeric_slots_[f]].name)) {
      boxcox_[f] = fit_boxcox(boxcox_samples_[f]);
      boxcox_samples_[f].clear();
      boxcox_samples_[f].shrink_to_fit();
    }
  }
  frozen_ = true;
}

EncodedInstance Encoder::encode(const Instance& instance) const {
  if (!frozen_) throw std::logic_error("encoder must be fitted and frozen before encoding");
  if (instance.values.size() != schema_.features.size())
    throw SchemaError("instance has " + std::to_string(instance.values.size()) + " values, schema has " +
                      std::to_string(schema_.features.size()));
  EncodedInstance out;
  out.index = instance.index;
  out.categories.reserve(categorical_slots_.size());
  out.numerics.reserve(numeric_slots_.size());
  for (std::size_t f = 0; f < categorical_slots_.size(); ++f) {
    const auto& value = std::get<std::string>(instance.values[categorical_slots_[f]]);
    const std::string_view token =
        prefix_len_[f] ? std::string_view(value).substr(0, prefix_len_[f]) : std::string_view(value);
    // unordered_map<string> lookup needs a string key in C++20.
    auto it = maps_[f].find(std::string(token));
    out.categories.push_back(it == maps_[f].end() ? unseen_index(f) : it->second);
  }
  for (std::size_t f = 0; f < numeric_slots_.size(); ++f) {
    double x = std::get<double>(instance.values[numeric_slots_[f]]);
    if (const auto& bc = boxcox_[f]) {
      // Below the fitted support: clamp to the positivity floor.
      if (!(x + bc->shift > 0.0)) x = kBoxCoxShiftEpsilon - bc->shift;
      x = apply_boxcox(x, *bc);
    }
    out.numerics.push_back(x);
  }
  return out;
}

EncodedLabeled Encoder::encode(const LabeledInstance& li) const {
  return {encode(li.instance), li.label};
}

std::vector<double> Encoder::one_hot(const EncodedInstance& encoded) const {
  std::vector<double> out;
  for (std::size_t f = 0; f < categorical_slots_.size(); ++f) {
    const std::size_t width = categories_[f].size() + 1;
    const std::size_t base = out.size();
    out.resize(base + width, 0.0);
    out[base + static_cast<std::size_t>(encoded.categories[f])] = 1.0;
  }
  out.insert(out.end(), encoded.numerics.begin(), encoded.numerics.end());
  return out;
}

std::vector<int> Encoder::cardinalities() const {
  std::vector<int> out;
  for (const auto& c : categories_) out.push_back(static_cast<int>(c.size()) + 1);
  return out;
}

std::int32_t Encoder::unseen_index(std::size_t categorical_feature) const {
  return static_cast<std::int32_t>(categories_.at(categorical_feature).size());
}

const std::optional<BoxCoxParams>& Encoder::boxcox_params(std::size_t numeric_feature) const {
  return boxcox_.at(numeric_feature);
}

Encoder Encoder::fit(const FeatureSchema& schema, std::span<const Instance> warmup,
                     const PreprocessConfig& config) {
  Encoder enc(schema, config);
  for (const auto& inst : warmup) enc.observe(inst);
  enc.freeze();
  return enc;
}

nlohmann::json bins_to_json(const BinBoundaries& bins) {
  return {{"upper_edges", bins.upper_edges},
          {"unit_divisor", bins.unit_divisor},
          {"floor_units", bins.floor_units}};
}

BinBoundaries bins_from_json(const nlohmann::json& doc) {
  BinBoundaries bins;
  bins.upper_edges = doc.at("upper_edges").get<std::vector<double>>();
  bins.unit_divisor = doc.at("unit_divisor").get<double>();
  bins.floor_units = doc.at("floor_units").get<bool>();
  return bins;
}

nlohmann::json Encoder::to_json() const {
  using nlohmann::json;
  json features = json::array();
  for (const auto& f : schema_.features)
    features.push_back({{"name", f.name}, {"kind", f.kind == FeatureKind::numeric ? "numeric" : "categorical"}});
  json categorical = json::array();
  for (std::size_t f = 0; f < categorical_slots_.size(); ++f)
    categorical.push_back({{"feature", schema_.features[categorical_slots_[f]].name},
                           {"prefix_len", prefix_len_[f]},
                           {"categories", categories_[f]}});
  json boxcox = json::array();
  for (std::size_t f = 0; f < numeric_slots_.size(); ++f)
    if (boxcox_[f])
      boxcox.push_back({{"feature", schema_.features[numeric_slots_[f]].name},
                        {"lambda", boxcox_[f]->lambda},
                        {"shift", boxcox_[f]->shift}});
  json doc = {{"version", kEncoderJsonVersion},
              {"frozen", frozen_},
              {"schema",
               {{"features", features},
                {"label_column", schema_.label_column},
                {"index_origin", schema_.index_origin},
                {"num_classes", schema_.num_classes}}},
              {"categorical", categorical},
              {"boxcox", boxcox}};
  if (target_bins_) doc["target_bins"] = bins_to_json(*target_bins_);
  return doc;
}

Encoder Encoder::from_json(const nlohmann::json& doc) {
  if (doc.at("version").get<int>() != kEncoderJsonVersion)
    throw ConfigError("unsupported encoder document version");
  FeatureSchema schema;
  for (const auto& f : doc.at("schema").at("features"))
    schema.features.push_back({f.at("name").get<std::string>(),
                               f.at("kind").get<std::string>() == "numeric" ? FeatureKind::numeric
                                                                            : FeatureKind::categorical});
  schema.label_column = doc.at("schema").at("label_column").get<std::string>();
  schema.index_origin = doc.at("schema").at("index_origin").get<std::int64_t>();
  schema.num_classes = doc.at("schema").at("num_classes").get<int>();

  PreprocessConfig config;
  for (const auto& c : doc.at("categorical")) {
    const auto len = c.at("prefix_len").get<std::size_t>();
    if (len) config.truncate[c.at("feature").get<std::string>()] = len;
  }
  for (const auto& b : doc.at("boxcox")) config.boxcox.insert(b.at("feature").get<std::string>());

  Encoder enc(schema, config);
  for (std::size_t f = 0; f < enc.categorical_slots_.size(); ++f) {
    const auto& tokens = doc.at("categorical").at(f).at("categories");
    for (const auto& t : tokens) {
      auto token = t.get<std::string>();
      enc.maps_[f].emplace(token, static_cast<std::int32_t>(enc.categories_[f].size()));
      enc.categories_[f].push_back(std::move(token));
    }
  }
  for (const auto& b : doc.at("boxcox")) {
    const auto pos = *schema.find(b.at("feature").get<std::string>());
    const auto slot = static_cast<std::size_t>(
        std::find(enc.numeric_slots_.begin(), enc.numeric_slots_.end(), pos) - enc.numeric_slots_.begin());
    enc.boxcox_[slot] = BoxCoxParams{b.at("lambda").get<double>(), b.at("shift").get<double>()};
  }
  if (doc.contains("target_bins")) enc.target_bins_ = bins_from_json(doc.at("target_bins"));
  enc.frozen_ = doc.at("frozen").get<bool>();
  return enc;
}

}  // namespace driftstream
