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

#include "driftstream/naive_bayes.hpp"

#include <cmath>

#include "driftstream/error.hpp"

namespace driftstream {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

NaiveBayes::NaiveBayes(NbLayout layout, NbParams params)
    : layout_(std::move(layout)), params_(params) {
  if (layout_.n_classes < 1) throw ConfigError("naive Bayes needs at least one class");
  if (!(params_.alpha > 0.0) || !(params_.var_floor > 0.0))
    throw ConfigError("smoothing alpha and variance floor must be > 0");
  const auto k = static_cast<std::size_t>(layout_.n_classes);
  class_counts_.assign(k, 0);
  std::size_t offset = 0;
  for (int card : layout_.cardinalities) {
    if (card < 1) throw ConfigError("categorical cardinality must be >= 1");
    offsets_.push_back(offset);
    offset += k * static_cast<std::size_t>(card);
  }
  counts_.assign(offset, 0);
  gauss_.assign(layout_.n_numeric * k, Welford{});
}

NaiveBayes NaiveBayes::fit(const NbLayout& layout, std::span<const EncodedLabeled> instances,
                           NbParams params) {
  if (instances.empty()) throw ConfigError("cannot fit naive Bayes on an empty training list");
  NaiveBayes model(layout, params);
  model.update(instances);
  return model;
}

void NaiveBayes::check(const EncodedLabeled& item) const {
  if (item.y.id < 0 || item.y.id >= layout_.n_classes)
    throw DomainError("label " + std::to_string(item.y.id) + " outside [0, " +
                      std::to_string(layout_.n_classes) + ")");
  if (item.x.categories.size() != layout_.cardinalities.size() || item.x.numerics.size() != layout_.n_numeric)
    throw SchemaError("encoded instance does not match the model layout");
  for (std::size_t f = 0; f < item.x.categories.size(); ++f)
    if (item.x.categories[f] < 0 || item.x.categories[f] >= layout_.cardinalities[f])
      throw DomainError("category index outside the feature's cardinality");
}

void NaiveBayes::update(const EncodedLabeled& item) {
  check(item);
  const auto c = static_cast<std::size_t>(item.y.id);
  const auto k = static_cast<std::size_t>(layout_.n_classes);
  ++total_;
  ++class_counts_[c];
  for (std::size_t f = 0; f < item.x.categories.size(); ++f) {
    const auto card = static_cast<std::size_t>(layout_.cardinalities[f]);
    ++counts_[offsets_[f] + c * card + static_cast<std::size_t>(item.x.categories[f])];
  }
  for (std::size_t f = 0; f < item.x.numerics.size(); ++f) gauss_[f * k + c].push(item.x.numerics[f]);
}

void NaiveBayes::update(std::span<const EncodedLabeled> batch) {
  for (const auto& item : batch) update(item);
}

void NaiveBayes::clear() {
  total_ = 0;
  std::fill(class_counts_.begin(), class_counts_.end(), 0);
  std::fill(counts_.begin(), counts_.end(), 0);
  std::fill(gauss_.begin(), gauss_.end(), Welford{});
}

std::int64_t NaiveBayes::category_count(std::size_t feature, int c, int category) const {
  const auto card = static_cast<std::size_t>(layout_.cardinalities.at(feature));
  return counts_.at(offsets_[feature] + static_cast<std::size_t>(c) * card + static_cast<std::size_t>(category));
}

const Welford& NaiveBayes::gaussian(std::size_t feature, int c) const {
  return gauss_.at(feature * static_cast<std::size_t>(layout_.n_classes) + static_cast<std::size_t>(c));
}

double NaiveBayes::log_prior(int c) const {
  const auto n = static_cast<double>(total_);
  const auto count = class_counts_[static_cast<std::size_t>(c)];
  if (count > 0) return std::log(static_cast<double>(count) / n);
  return std::log(params_.alpha / (n + params_.alpha * layout_.n_classes));
}

double NaiveBayes::log_scores_into(const EncodedInstance& x, double* scores) const {
  const int k = layout_.n_classes;
  const double alpha = params_.alpha;
  double best = -INFINITY;
  for (int c = 0; c < k; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    double s = log_prior(c);
    const double class_n = static_cast<double>(class_counts_[cu]);
    for (std::size_t f = 0; f < x.categories.size(); ++f) {
      const int card = layout_.cardinalities[f];
      const auto idx = offsets_[f] + cu * static_cast<std::size_t>(card) + static_cast<std::size_t>(x.categories[f]);
      s += std::log((static_cast<double>(counts_[idx]) + alpha) / (class_n + alpha * card));
    }
    for (std::size_t f = 0; f < x.numerics.size(); ++f) {
      const Welford& g = gauss_[f * static_cast<std::size_t>(k) + cu];
      const double var = g.variance(params_.var_floor);
      const double d = x.numerics[f] - g.mean;
      s += -0.5 * (kLog2Pi + std::log(var)) - d * d / (2.0 * var);
    }
    scores[cu] = s;
    if (s > best) best = s;
  }
  return best;
}

NbPrediction NaiveBayes::predict(const EncodedInstance& x) const {
  if (total_ == 0) throw std::logic_error("predict on an untrained model");
  NbPrediction out;
  out.log_scores.resize(static_cast<std::size_t>(layout_.n_classes));
  log_scores_into(x, out.log_scores.data());
  int best = 0;
  for (int c = 1; c < layout_.n_classes; ++c)
    if (out.log_scores[static_cast<std::size_t>(c)] > out.log_scores[static_cast<std::size_t>(best)]) best = c;
  out.label = ClassLabel{best};
  return out;
}

ClassLabel NaiveBayes::predict_label(const EncodedInstance& x) const {
  if (total_ == 0) throw std::logic_error("predict on an untrained model");
  constexpr int kStackClasses = 16;
  double stack_scores[kStackClasses];
  std::vector<double> heap_scores;
  double* scores = stack_scores;
  if (layout_.n_classes > kStackClasses) {
    heap_scores.resize(static_cast<std::size_t>(layout_.n_classes));
    scores = heap_scores.data();
  }
  log_scores_into(x, scores);
  int best = 0;
  for (int c = 1; c < layout_.n_classes; ++c)
    if (scores[c] > scores[best]) best = c;
  return ClassLabel{best};
}

std::vector<double> NaiveBayes::posterior(const EncodedInstance& x) const {
  auto p = predict(x).log_scores;
  double mx = -INFINITY;
  for (double v : p) mx = std::max(mx, v);
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

nlohmann::json NaiveBayes::to_json() const {
  nlohmann::json gauss = nlohmann::json::array();
  for (const auto& g : gauss_) gauss.push_back({g.count, g.mean, g.m2});
  return {{"version", kModelJsonVersion},
          {"n_classes", layout_.n_classes},
          {"cardinalities", layout_.cardinalities},
          {"n_numeric", layout_.n_numeric},
          {"alpha", params_.alpha},
          {"var_floor", params_.var_floor},
          {"total", total_},
          {"class_counts", class_counts_},
          {"category_counts", counts_},
          {"gaussian", gauss}};
}

NaiveBayes NaiveBayes::from_json(const nlohmann::json& doc) {
  if (doc.at("version").get<int>() != kModelJsonVersion) throw ConfigError("unsupported model document version");
  NbLayout layout{doc.at("cardinalities").get<std::vector<int>>(), doc.at("n_numeric").get<std::size_t>(),
                  doc.at("n_classes").get<int>()};
  NaiveBayes model(layout, NbParams{doc.at("alpha").get<double>(), doc.at("var_floor").get<double>()});
  model.total_ = doc.at("total").get<std::int64_t>();
  model.class_counts_ = doc.at("class_counts").get<std::vector<std::int64_t>>();
  auto counts = doc.at("category_counts").get<std::vector<std::int64_t>>();
  const auto& gauss = doc.at("gaussian");
  if (counts.size() != model.counts_.size() || gauss.size() != model.gauss_.size() ||
      model.class_counts_.size() != static_cast<std::size_t>(layout.n_classes))
    throw ConfigError("model document dimensions do not match its layout");
  model.counts_ = std::move(counts);
  for (std::size_t i = 0; i < gauss.size(); ++i)
    model.gauss_[i] = Welford{gauss[i].at(0).get<std::int64_t>(), gauss[i].at(1).get<double>(),
                              gauss[i].at(2).get<double>()};
  return model;
}

}  // namespace driftstream
