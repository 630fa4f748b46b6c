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
#include <deque>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace driftstream {

enum class DetectorSignal { no_change, drift };

struct PageHinkleyParams {
  double delta = 0.005;       // tolerated magnitude of change
  double lambda = 0.6;        // alarm threshold
  std::int64_t burn_in = 30;  // observations before alarms are allowed
};

struct AdwinParams {
  double delta = 0.001;
  int max_buckets = 5;    // per row before the two oldest are merged
  int check_period = 32;
  int min_subwindow = 5;  // both sides of a cut need this many observations
};

// One-sided Page-Hinkley test on a stream in [0, 1]. Detects an increase of
// the monitored mean. The caller resets the state after an alarm.
class PageHinkley {
 public:
  using Params = PageHinkleyParams;

  explicit PageHinkley(Params params = {});

  DetectorSignal observe(double x);
  void reset();

  // Alarm statistic m_t - min m.
  double statistic() const { return m_ - m_min_; }
  std::int64_t observations() const { return t_; }
  double running_mean() const { return mean_; }
  double cumulative() const { return m_; }
  double cumulative_min() const { return m_min_; }
  const Params& params() const { return params_; }

 private:
  Params params_;
  std::int64_t t_ = 0;
  double mean_ = 0.0;
  double m_ = 0.0;
  double m_min_ = 0.0;
};

// Adaptive windowing over an exponential histogram. Row r holds buckets of
// 2^r observations, newest at the back; row 0 is the newest row. Every
// `check_period` observations all bucket-boundary cuts are tested from the
// oldest one, and while some cut separates sub-windows W0 (older) and W1
// with |mean(W0) - mean(W1)| >= sqrt(ln(4 |W| / delta) / (2 m)),
// m = 1 / (1/|W0| + 1/|W1|), the oldest bucket is dropped.
class Adwin {
 public:
  using Params = AdwinParams;

  explicit Adwin(Params params = {});

  DetectorSignal observe(double x);
  void reset();

  std::int64_t width() const { return width_; }
  double total() const { return total_; }
  double mean() const { return width_ ? total_ / static_cast<double>(width_) : 0.0; }
  // Mean difference of the last cut that triggered a drop.
  double statistic() const { return last_cut_diff_; }
  // Observations removed from the front of the window since the last reset.
  std::int64_t dropped() const { return dropped_; }
  const std::vector<std::deque<double>>& rows() const { return rows_; }
  const Params& params() const { return params_; }

 private:
  void insert(double x);
  void compress();
  bool find_cut();
  void drop_oldest();

  Params params_;
  std::vector<std::deque<double>> rows_;
  std::int64_t width_ = 0;
  double total_ = 0.0;
  std::int64_t ticks_ = 0;
  std::int64_t dropped_ = 0;
  double last_cut_diff_ = 0.0;
};

enum class DetectorKind { none, page_hinkley, adwin };

std::string_view to_string(DetectorKind kind);
// Accepts none, page-hinkley, page_hinkley, ph, adwin.
DetectorKind parse_detector_kind(std::string_view name);

struct DetectorConfig {
  DetectorKind kind = DetectorKind::none;
  PageHinkley::Params page_hinkley;
  Adwin::Params adwin;
};

// Type-erased detector used by the retraining controller.
class Detector {
 public:
  explicit Detector(const DetectorConfig& config = {});

  DetectorSignal observe(double x);
  void reset();
  double statistic() const;
  DetectorKind kind() const;
  bool enabled() const { return kind() != DetectorKind::none; }

  const PageHinkley* page_hinkley() const { return std::get_if<PageHinkley>(&state_); }
  const Adwin* adwin() const { return std::get_if<Adwin>(&state_); }

 private:
  std::variant<std::monostate, PageHinkley, Adwin> state_;
};

}  // namespace driftstream
