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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "driftstream/detectors.hpp"
#include "driftstream/naive_bayes.hpp"

namespace driftstream {

// Which labelled instances feed a retraining after an alarm.
enum class Strategy {
  last,   // the batch buffered before the alarm; new model active immediately
  mixed,  // ceil(f*B) before and the rest after the alarm
  next,   // the next B instances; the old model bridges the collection
};

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

struct AdaptationConfig {
  DetectorConfig detector;
  std::optional<Strategy> strategy;
  std::size_t batch_size = 500;
  bool incremental = false;
  std::size_t mini_batch = 10;
  double mixed_pre_fraction = 0.5;
  NbParams nb;

  // A strategy requires a detector and vice versa; sizes must be >= 1.
  void validate() const;
  std::size_t mixed_pre_count() const;
};

// Fixed-capacity FIFO; overwriting reuses slot storage.
template <typename T>
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity) : slots_(capacity) {}

  void push(const T& item) {
    if (slots_.empty()) return;
    slots_[(head_ + size_) % slots_.size()] = item;
    if (size_ < slots_.size())
      ++size_;
    else
      head_ = (head_ + 1) % slots_.size();
  }
  // 0 is the oldest item.
  const T& operator[](std::size_t i) const { return slots_[(head_ + i) % slots_.size()]; }
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return slots_.size(); }
  void clear() {
    head_ = 0;
    size_ = 0;
  }

 private:
  std::vector<T> slots_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

enum class ControllerMode { stable, collecting_next, collecting_mixed };

struct StepEvents {
  bool drift = false;
  bool retrained = false;
  double statistic = 0.0;  // detector statistic when `drift`
};

struct StepResult {
  ClassLabel prediction;
  StepEvents events;
};

struct RetrainInfo {
  std::int64_t alarm_index = 0;       // first instance after the alarming one
  std::int64_t activation_index = 0;  // first instance the new model predicts
  std::vector<std::int64_t> training_indices;
};

// Test-then-train retraining controller for one stream.
class Controller {
 public:
  Controller(NbLayout layout, AdaptationConfig config);

  // Fits the initial model and pre-fills the retraining buffer with the last
  // min(B, n) warm-up instances. Throws DataError when `warmup` is empty.
  void warmup(std::span<const EncodedLabeled> warmup);

  // Predict with the current model, then learn from the label: feed the
  // detector and the incremental mini-batch (stable mode only), buffer the
  // instance, react to an alarm or advance a pending collection.
  StepResult step(const EncodedLabeled& item);

  // Baseline: no detection and no updates from here on.
  void make_static();

  bool warmed_up() const { return model_.has_value(); }
  ControllerMode mode() const { return mode_; }
  std::size_t remaining() const { return remaining_; }
  std::size_t buffered() const { return buffer_.size(); }
  std::size_t pending_pre_drift() const { return pre_drift_fill_; }
  const NaiveBayes& model() const { return *model_; }
  const Detector& detector() const { return detector_; }
  const AdaptationConfig& config() const { return config_; }

  void on_retrain(std::function<void(const RetrainInfo&)> observer) { observer_ = std::move(observer); }

 private:
  void retrain_from(std::span<const EncodedLabeled* const> set, std::int64_t alarm_index,
                    std::int64_t activation_index);

  NbLayout layout_;
  AdaptationConfig config_;
  std::optional<NaiveBayes> model_;
  Detector detector_;
  RingBuffer<EncodedLabeled> buffer_;
  std::vector<EncodedLabeled> mini_batch_;
  std::size_t mini_batch_fill_ = 0;
  std::vector<EncodedLabeled> pre_drift_;
  std::size_t pre_drift_fill_ = 0;
  std::vector<const EncodedLabeled*> retrain_set_;
  ControllerMode mode_ = ControllerMode::stable;
  std::size_t remaining_ = 0;
  std::int64_t alarm_index_ = 0;
  std::function<void(const RetrainInfo&)> observer_;
};

}  // namespace driftstream
