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

#include "driftstream/adaptation.hpp"

#include <cmath>
#include <stdexcept>

#include "driftstream/error.hpp"

namespace driftstream {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::last:
      return "last";
    case Strategy::mixed:
      return "mixed";
    case Strategy::next:
      return "next";
  }
  return "last";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "last") return Strategy::last;
  if (name == "mixed") return Strategy::mixed;
  if (name == "next") return Strategy::next;
  throw ConfigError("unknown strategy '" + std::string(name) + "'");
}

void AdaptationConfig::validate() const {
  const bool has_detector = detector.kind != DetectorKind::none;
  if (strategy && !has_detector) throw ConfigError("a selection strategy requires a drift detector");
  if (has_detector && !strategy) throw ConfigError("a drift detector requires a selection strategy");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (mini_batch < 1) throw ConfigError("mini-batch size must be >= 1");
  if (!(mixed_pre_fraction >= 0.0 && mixed_pre_fraction <= 1.0))
    throw ConfigError("mixed pre-alarm fraction must lie in [0, 1]");
  // Constructing the detector validates its parameters.
  Detector probe(detector);
  (void)probe;
}

std::size_t AdaptationConfig::mixed_pre_count() const {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(batch_size) * mixed_pre_fraction));
}

Controller::Controller(NbLayout layout, AdaptationConfig config)
    : layout_(std::move(layout)),
      config_(std::move(config)),
      detector_((config_.validate(), config_.detector)),
      buffer_(config_.batch_size) {}

void Controller::warmup(std::span<const EncodedLabeled> warmup) {
  if (warmup.empty()) throw DataError("warm-up needs at least one labelled instance");
  model_ = NaiveBayes::fit(layout_, warmup, config_.nb);
  detector_.reset();
  buffer_.clear();
  const std::size_t keep = std::min(config_.batch_size, warmup.size());
  for (const auto& item : warmup.subspan(warmup.size() - keep)) buffer_.push(item);
  mode_ = ControllerMode::stable;
  mini_batch_fill_ = 0;
  pre_drift_fill_ = 0;
}

void Controller::make_static() {
  config_.detector.kind = DetectorKind::none;
  config_.strategy.reset();
  config_.incremental = false;
  detector_ = Detector(config_.detector);
  mode_ = ControllerMode::stable;
  mini_batch_fill_ = 0;
  pre_drift_fill_ = 0;
}

namespace {

void store(std::vector<EncodedLabeled>& slots, std::size_t& fill, const EncodedLabeled& item) {
  if (fill < slots.size())
    slots[fill] = item;
  else
    slots.push_back(item);
  ++fill;
}

}  // namespace

StepResult Controller::step(const EncodedLabeled& item) {
  if (!model_) throw std::logic_error("controller stepped before warm-up");
  StepResult result;
  result.prediction = model_->predict_label(item.x);

  bool alarm = false;
  if (mode_ == ControllerMode::stable && detector_.enabled()) {
    const double error = result.prediction == item.y ? 0.0 : 1.0;
    if (detector_.observe(error) == DetectorSignal::drift) {
      alarm = true;
      result.events.statistic = detector_.statistic();
    }
  }

  if (mode_ == ControllerMode::stable && config_.incremental) {
    store(mini_batch_, mini_batch_fill_, item);
    if (mini_batch_fill_ == config_.mini_batch) {
      model_->update(std::span<const EncodedLabeled>(mini_batch_.data(), mini_batch_fill_));
      mini_batch_fill_ = 0;
    }
  }

  buffer_.push(item);

  if (alarm) {
    result.events.drift = true;
    mini_batch_fill_ = 0;
    alarm_index_ = item.x.index + 1;
    switch (*config_.strategy) {
      case Strategy::last: {
        retrain_set_.clear();
        for (std::size_t i = 0; i < buffer_.size(); ++i) retrain_set_.push_back(&buffer_[i]);
        retrain_from(retrain_set_, alarm_index_, alarm_index_);
        result.events.retrained = true;
        break;
      }
      case Strategy::next:
        mode_ = ControllerMode::collecting_next;
        remaining_ = config_.batch_size;
        break;
      case Strategy::mixed: {
        const std::size_t pre = std::min(config_.mixed_pre_count(), buffer_.size());
        pre_drift_fill_ = 0;
        for (std::size_t i = buffer_.size() - pre; i < buffer_.size(); ++i)
          store(pre_drift_, pre_drift_fill_, buffer_[i]);
        remaining_ = config_.batch_size - config_.mixed_pre_count();
        mode_ = ControllerMode::collecting_mixed;
        if (remaining_ == 0) {
          retrain_set_.clear();
          for (std::size_t i = 0; i < pre_drift_fill_; ++i) retrain_set_.push_back(&pre_drift_[i]);
          retrain_from(retrain_set_, alarm_index_, alarm_index_);
          result.events.retrained = true;
        }
        break;
      }
    }
    return result;
  }

  if (mode_ != ControllerMode::stable) {
    if (--remaining_ == 0) {
      retrain_set_.clear();
      if (mode_ == ControllerMode::collecting_mixed)
        for (std::size_t i = 0; i < pre_drift_fill_; ++i) retrain_set_.push_back(&pre_drift_[i]);
      const std::size_t post = mode_ == ControllerMode::collecting_next
                                   ? config_.batch_size
                                   : config_.batch_size - config_.mixed_pre_count();
      for (std::size_t i = buffer_.size() - std::min(post, buffer_.size()); i < buffer_.size(); ++i)
        retrain_set_.push_back(&buffer_[i]);
      retrain_from(retrain_set_, alarm_index_, item.x.index + 1);
      result.events.retrained = true;
    }
  }
  return result;
}

void Controller::retrain_from(std::span<const EncodedLabeled* const> set, std::int64_t alarm_index,
                              std::int64_t activation_index) {
  model_->clear();
  for (const EncodedLabeled* item : set) model_->update(*item);
  if (model_->total() == 0) throw std::logic_error("retraining set is empty");
  if (observer_) {
    RetrainInfo info;
    info.alarm_index = alarm_index;
    info.activation_index = activation_index;
    for (const EncodedLabeled* item : set) info.training_indices.push_back(item->x.index);
    observer_(info);
  }
  detector_.reset();
  mode_ = ControllerMode::stable;
  remaining_ = 0;
  pre_drift_fill_ = 0;
  mini_batch_fill_ = 0;
}

}  // namespace driftstream
