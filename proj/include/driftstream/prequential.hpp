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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "driftstream/adaptation.hpp"
#include "driftstream/preprocess.hpp"
#include "driftstream/stream.hpp"

namespace driftstream {

struct PrequentialRecord {
  std::int64_t index = 0;
  ClassLabel predicted;
  ClassLabel actual;
  bool correct = false;
  double rolling_accuracy = 0.0;
  bool drift = false;
  bool retrain = false;
};

enum class EventKind { drift, retrain_start, retrain_done };
std::string_view to_string(EventKind kind);

struct ExperimentEvent {
  std::int64_t index = 0;
  EventKind kind = EventKind::drift;
  double statistic = 0.0;
};

struct ExperimentSummary {
  double accuracy = 0.0;
  std::int64_t n_predictions = 0;
  std::int64_t n_correct = 0;
  std::int64_t n_drifts = 0;
  std::int64_t n_retrains = 0;
  std::optional<double> performance_increase;   // relative to a baseline
  std::vector<std::vector<std::int64_t>> confusion;  // [actual][predicted]
};

// (acc - baseline) / baseline.
double performance_increase(double accuracy, double baseline_accuracy);

struct ExperimentConfig {
  std::size_t warmup = 2000;
  std::size_t rolling_window = 1000;
  bool keep_records = true;
  AdaptationConfig adaptation;
  // Force the no-detection, no-update baseline regardless of `adaptation`.
  bool static_model = false;

  void validate() const;
};

struct ExperimentResult {
  std::vector<PrequentialRecord> records;
  std::vector<ExperimentEvent> events;
  ExperimentSummary summary;
  std::optional<NaiveBayes> final_model;
};

// Labelled stream encoded once with an encoder fitted and frozen on the
// first `warmup` instances. Shared read-only by every run over the stream.
struct PreparedStream {
  Encoder encoder;
  NbLayout layout;
  std::vector<EncodedLabeled> instances;
  std::size_t warmup = 0;
};

// Throws ConfigError for warmup == 0 and DataError when the stream holds
// fewer than `warmup` instances.
PreparedStream prepare(const FeatureSchema& schema, std::span<const LabeledInstance> stream,
                       const PreprocessConfig& preprocess, std::size_t warmup);

// Prequential run over the first `limit` instances (all by default): warm-up,
// then one record per remaining instance.
ExperimentResult run_experiment(const PreparedStream& stream, const ExperimentConfig& config,
                                std::size_t limit = std::numeric_limits<std::size_t>::max());

ExperimentResult run_experiment(const FeatureSchema& schema, std::span<const LabeledInstance> stream,
                                const PreprocessConfig& preprocess, const ExperimentConfig& config);

// output[i] = mean(series[max(0, i-window+1) ..= i]); window >= 1.
std::vector<double> rolling_mean(std::span<const double> series, std::size_t window);

// ---------------------------------------------------------------------------
// Parameter grid search.

// Recognised names: lambda, ph_delta, burn_in, adwin_delta, batch_size,
// mini_batch.
struct GridAxis {
  std::string name;
  std::vector<double> values;
};
using GridPoint = std::vector<std::pair<std::string, double>>;

// Cartesian product, first axis slowest. Throws ConfigError on an empty grid.
std::vector<GridPoint> expand_grid(const std::vector<GridAxis>& axes);
ExperimentConfig apply_grid_point(ExperimentConfig config, const GridPoint& point);
std::string describe(const GridPoint& point);

struct GridResult {
  std::vector<GridPoint> points;
  std::vector<ExperimentSummary> summaries;
  std::size_t best = 0;  // maximal accuracy, first in grid order on ties
};

GridResult grid_search(const PreparedStream& stream, std::size_t prefix, const std::vector<GridPoint>& grid,
                       const ExperimentConfig& fixed, int workers = 1);

// ---------------------------------------------------------------------------
// Detector x batch size x strategy matrix plus the four baseline rows.

struct MatrixSpec {
  std::vector<DetectorConfig> detectors;
  std::vector<std::size_t> batch_sizes{500, 1000, 2000, 5000};
  std::vector<Strategy> strategies{Strategy::last, Strategy::mixed, Strategy::next};
  bool incremental = true;
  bool baselines = true;
  // Detector of the detection baseline rows; batch size is the first one.
  DetectorConfig baseline_detector{DetectorKind::page_hinkley, {}, {}};
};

struct MatrixCell {
  bool baseline = false;
  DetectorKind detector = DetectorKind::none;
  std::size_t batch_size = 0;
  std::optional<Strategy> strategy;
  bool incremental = false;
  ExperimentSummary summary;
};

// Cell configurations in output order: baselines first (static,
// incremental-only, detection-only, detection+incremental), then detectors x
// batch sizes x strategies.
std::vector<std::pair<MatrixCell, ExperimentConfig>> matrix_cells(const ExperimentConfig& base,
                                                                  const MatrixSpec& spec);

// Runs every cell independently. `workers` = 0 uses all available threads,
// 1 runs the serial reference loop.
std::vector<MatrixCell> experiment_matrix(const PreparedStream& stream, const ExperimentConfig& base,
                                          const MatrixSpec& spec, int workers = 0);

}  // namespace driftstream
