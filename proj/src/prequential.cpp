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

#include "driftstream/prequential.hpp"

#include <cmath>
#include <sstream>

#include "driftstream/csv.hpp"
#include "driftstream/error.hpp"
#include "driftstream/kernels.hpp"

namespace driftstream {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::drift:
      return "drift";
    case EventKind::retrain_start:
      return "retrain_start";
    case EventKind::retrain_done:
      return "retrain_done";
  }
  return "drift";
}

double performance_increase(double accuracy, double baseline_accuracy) {
  if (!(baseline_accuracy > 0.0)) throw DomainError("baseline accuracy must be > 0");
  return (accuracy - baseline_accuracy) / baseline_accuracy;
}

void ExperimentConfig::validate() const {
  if (warmup == 0) throw ConfigError("warm-up size must be >= 1");
  if (rolling_window == 0) throw ConfigError("rolling window must be >= 1");
  adaptation.validate();
}

PreparedStream prepare(const FeatureSchema& schema, std::span<const LabeledInstance> stream,
                       const PreprocessConfig& preprocess, std::size_t warmup) {
  if (warmup == 0) throw ConfigError("warm-up size must be >= 1");
  if (stream.size() < warmup)
    throw DataError("stream has " + std::to_string(stream.size()) + " labelled instances, warm-up needs " +
                    std::to_string(warmup));
  Encoder encoder(schema, preprocess);
  for (const auto& li : stream.first(warmup)) encoder.observe(li.instance);
  encoder.freeze();

  PreparedStream out{std::move(encoder), {}, {}, warmup};
  out.layout = NbLayout{out.encoder.cardinalities(), schema.count(FeatureKind::numeric), schema.num_classes};
  out.instances.reserve(stream.size());
  for (const auto& li : stream) {
    if (li.label.id < 0 || li.label.id >= schema.num_classes)
      throw DataError("label " + std::to_string(li.label.id) + " at index " + std::to_string(li.instance.index) +
                      " outside [0, " + std::to_string(schema.num_classes) + ")");
    out.instances.push_back(out.encoder.encode(li));
  }
  return out;
}

ExperimentResult run_experiment(const PreparedStream& stream, const ExperimentConfig& config,
                                std::size_t limit) {
  config.validate();
  if (config.warmup != stream.warmup)
    throw ConfigError("experiment warm-up does not match the prepared stream");
  const std::size_t n = std::min(limit, stream.instances.size());
  if (n < config.warmup) throw DataError("stream shorter than the warm-up");

  Controller controller(stream.layout, config.adaptation);
  controller.warmup(std::span(stream.instances).first(config.warmup));
  if (config.static_model) controller.make_static();

  ExperimentResult result;
  auto& summary = result.summary;
  const auto k = static_cast<std::size_t>(stream.layout.n_classes);
  summary.confusion.assign(k, std::vector<std::int64_t>(k, 0));
  if (config.keep_records) result.records.reserve(n - config.warmup);

  // Rolling window of correctness flags as a ring of bytes.
  std::vector<unsigned char> window(config.rolling_window, 0);
  std::size_t window_fill = 0, window_pos = 0;
  std::int64_t window_sum = 0;

  for (std::size_t i = config.warmup; i < n; ++i) {
    const EncodedLabeled& item = stream.instances[i];
    const StepResult step = controller.step(item);
    const bool correct = step.prediction == item.y;

    if (window_fill == window.size()) window_sum -= window[window_pos];
    else ++window_fill;
    window[window_pos] = correct;
    window_sum += correct;
    window_pos = (window_pos + 1) % window.size();

    ++summary.n_predictions;
    summary.n_correct += correct;
    ++summary.confusion[static_cast<std::size_t>(item.y.id)][static_cast<std::size_t>(step.prediction.id)];
    if (step.events.drift) {
      ++summary.n_drifts;
      result.events.push_back({item.x.index, EventKind::drift, step.events.statistic});
      result.events.push_back({item.x.index, EventKind::retrain_start, step.events.statistic});
    }
    if (step.events.retrained) {
      ++summary.n_retrains;
      result.events.push_back({item.x.index, EventKind::retrain_done, 0.0});
    }
    if (config.keep_records)
      result.records.push_back({item.x.index, step.prediction, item.y, correct,
                                static_cast<double>(window_sum) / static_cast<double>(window_fill),
                                step.events.drift, step.events.retrained});
  }
  summary.accuracy = summary.n_predictions
                         ? static_cast<double>(summary.n_correct) / static_cast<double>(summary.n_predictions)
                         : 0.0;
  if (config.keep_records) result.final_model = controller.model();
  return result;
}

ExperimentResult run_experiment(const FeatureSchema& schema, std::span<const LabeledInstance> stream,
                                const PreprocessConfig& preprocess, const ExperimentConfig& config) {
  config.validate();
  return run_experiment(prepare(schema, stream, preprocess, config.warmup), config);
}

std::vector<double> rolling_mean(std::span<const double> series, std::size_t window) {
  if (window == 0) throw ConfigError("rolling window must be >= 1");
  return kernels::omp::rolling_mean(series, window);
}

// ---------------------------------------------------------------------------

std::vector<GridPoint> expand_grid(const std::vector<GridAxis>& axes) {
  if (axes.empty()) throw ConfigError("empty parameter grid");
  for (const auto& axis : axes)
    if (axis.values.empty()) throw ConfigError("empty parameter grid: axis '" + axis.name + "' has no values");
  std::vector<GridPoint> points{GridPoint{}};
  for (const auto& axis : axes) {
    std::vector<GridPoint> next;
    for (const auto& p : points)
      for (double v : axis.values) {
        GridPoint q = p;
        q.emplace_back(axis.name, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

namespace {

std::size_t as_count(const std::string& name, double v) {
  if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(name + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig apply_grid_point(ExperimentConfig config, const GridPoint& point) {
  auto& a = config.adaptation;
  for (const auto& [name, v] : point) {
    if (name == "lambda") a.detector.page_hinkley.lambda = v;
    else if (name == "ph_delta") a.detector.page_hinkley.delta = v;
    else if (name == "burn_in") a.detector.page_hinkley.burn_in = static_cast<std::int64_t>(v);
    else if (name == "adwin_delta") a.detector.adwin.delta = v;
    else if (name == "batch_size") a.batch_size = as_count(name, v);
    else if (name == "mini_batch") a.mini_batch = as_count(name, v);
    else throw ConfigError("unknown grid parameter '" + name + "'");
  }
  return config;
}

std::string describe(const GridPoint& point) {
  std::ostringstream out;
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out << ' ';
    out << point[i].first << '=' << format_roundtrip(point[i].second);
  }
  return out.str();
}

GridResult grid_search(const PreparedStream& stream, std::size_t prefix, const std::vector<GridPoint>& grid,
                       const ExperimentConfig& fixed, int workers) {
  if (grid.empty()) throw ConfigError("empty parameter grid");
  if (prefix > stream.instances.size())
    throw ConfigError("grid-search prefix " + std::to_string(prefix) + " exceeds the stream length " +
                      std::to_string(stream.instances.size()));
  if (prefix <= fixed.warmup) throw ConfigError("grid-search prefix must exceed the warm-up");

  GridResult out;
  out.points = grid;
  std::vector<ExperimentConfig> configs;
  for (const auto& p : grid) {
    configs.push_back(apply_grid_point(fixed, p));
    configs.back().keep_records = false;
    configs.back().validate();
  }
  out.summaries.resize(grid.size());
  auto body = [&](std::size_t i) { out.summaries[i] = run_experiment(stream, configs[i], prefix).summary; };
  if (workers == 1)
    kernels::serial::for_each_cell(grid.size(), body);
  else
    kernels::omp::for_each_cell(grid.size(), body, workers);
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (out.summaries[i].accuracy > out.summaries[out.best].accuracy) out.best = i;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<MatrixCell, ExperimentConfig>> matrix_cells(const ExperimentConfig& base,
                                                                  const MatrixSpec& spec) {
  if (spec.detectors.empty() || spec.batch_sizes.empty() || spec.strategies.empty())
    throw ConfigError("experiment matrix needs at least one detector, batch size and strategy");
  std::vector<std::pair<MatrixCell, ExperimentConfig>> cells;
  auto add = [&](DetectorConfig detector, std::optional<Strategy> strategy, std::size_t batch, bool incremental,
                 bool baseline) {
    ExperimentConfig cfg = base;
    cfg.keep_records = false;
    cfg.static_model = false;
    cfg.adaptation.detector = detector;
    cfg.adaptation.strategy = strategy;
    cfg.adaptation.batch_size = batch;
    cfg.adaptation.incremental = incremental;
    cfg.validate();
    MatrixCell cell;
    cell.baseline = baseline;
    cell.detector = detector.kind;
    cell.batch_size = batch;
    cell.strategy = strategy;
    cell.incremental = incremental;
    cells.emplace_back(cell, cfg);
  };
  const std::size_t first_batch = spec.batch_sizes.front();
  if (spec.baselines) {
    DetectorConfig none{};
    add(none, std::nullopt, first_batch, false, true);
    cells.back().second.static_model = true;
    add(none, std::nullopt, first_batch, true, true);
    add(spec.baseline_detector, Strategy::last, first_batch, false, true);
    add(spec.baseline_detector, Strategy::last, first_batch, true, true);
  }
  for (const auto& det : spec.detectors)
    for (std::size_t batch : spec.batch_sizes)
      for (Strategy s : spec.strategies) add(det, s, batch, spec.incremental, false);
  return cells;
}

std::vector<MatrixCell> experiment_matrix(const PreparedStream& stream, const ExperimentConfig& base,
                                          const MatrixSpec& spec, int workers) {
  auto cells = matrix_cells(base, spec);
  std::vector<MatrixCell> out(cells.size());
  auto body = [&](std::size_t i) {
    out[i] = cells[i].first;
    out[i].summary = run_experiment(stream, cells[i].second).summary;
  };
  if (workers == 1)
    kernels::serial::for_each_cell(cells.size(), body);
  else
    kernels::omp::for_each_cell(cells.size(), body, workers);

  if (spec.baselines) {
    const double baseline = out.front().summary.accuracy;
    if (baseline > 0.0)
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i].summary.performance_increase = performance_increase(out[i].summary.accuracy, baseline);
  }
  return out;
}

}  // namespace driftstream
