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

#include "driftstream/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftstream/csv.hpp"
#include "driftstream/error.hpp"
#include "driftstream/prequential.hpp"
#include "driftstream/synth.hpp"

namespace driftstream {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kDefaultOutDir = "driftstream-out";
const std::vector<std::string> kCommands{"run", "generate", "gridsearch", "matrix", "inspect"};

// ---------------------------------------------------------------------------
// Option bundles shared between subcommands.

struct GlobalOptions {
  std::string out;
  std::uint64_t seed = 42;
  std::string config;
  bool quiet = false;
};

struct SynthOptions {
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> drift_at;
  std::optional<std::string> drift_kind;
  std::optional<std::int64_t> drift_width;
  std::optional<double> magnitude;
};

struct SourceOptions {
  std::string input;
  std::string synth;
  SynthOptions synth_overrides;
  std::string label = "label";
  std::string categorical;
  std::string numeric;
  int classes = 3;
  std::optional<std::string> truncate;
  std::optional<std::string> boxcox;
  bool label_hours = false;
  std::string bins = "fixed";
  std::string day_edges = "6,39";
};

struct ExperimentOptions {
  std::size_t warmup = 2000;
  std::size_t window = 1000;
  std::size_t mini_batch = 10;
  double mixed_fraction = 0.5;
};

struct DetectorOptions {
  std::string detector;
  double lambda = 0.6;
  double ph_delta = 0.005;
  std::int64_t burn_in = 30;
  double adwin_delta = 0.001;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  for (const auto& token : split_list(text)) {
    double v = 0.0;
    if (!parse_double(token, v)) throw ConfigError("--" + flag + ": '" + token + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& flag, const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_number_list(flag, text)) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw ConfigError("--" + flag + ": values must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void add_global_options(CLI::App& app, GlobalOptions& g) {
  app.add_option("--out,-o", g.out, "Output directory (default: $DRIFTSTREAM_OUT or driftstream-out)");
  app.add_option("--seed", g.seed, "Random seed for synthetic streams");
  app.add_option("--config", g.config, "key=value file mirroring flag names; flags override it");
  app.add_flag("--quiet,-q", g.quiet, "Suppress the summary on standard output");
}

void add_synth_overrides(CLI::App& cmd, SynthOptions& s) {
  cmd.add_option("--n", s.n, "Number of synthetic instances");
  cmd.add_option("--drift-at", s.drift_at, "Drift onset index");
  cmd.add_option("--drift-kind", s.drift_kind, "sudden | gradual | recurring | none");
  cmd.add_option("--drift-width", s.drift_width, "Gradual window or recurring period");
  cmd.add_option("--magnitude", s.magnitude, "Drift magnitude in [0, 1]");
}

void add_source_options(CLI::App& cmd, SourceOptions& s) {
  cmd.add_option("--input", s.input, "Chronological CSV stream ('-' for standard input where allowed)");
  cmd.add_option("--synth", s.synth, "Synthetic profile: paper-like | no-drift");
  add_synth_overrides(cmd, s.synth_overrides);
  cmd.add_option("--label", s.label, "Label column");
  cmd.add_option("--categorical", s.categorical, "Comma-separated categorical feature columns");
  cmd.add_option("--numeric", s.numeric, "Comma-separated numeric feature columns");
  cmd.add_option("--classes", s.classes, "Number of classes");
  cmd.add_option("--truncate", s.truncate, "Category prefix truncation, e.g. material_class:4");
  cmd.add_option("--boxcox", s.boxcox, "Comma-separated numeric features to Box-Cox transform");
  cmd.add_flag("--label-hours", s.label_hours, "Label column holds throughput hours to be binned");
  cmd.add_option("--bins", s.bins, "Target binning for --label-hours: fixed | tertile");
  cmd.add_option("--day-edges", s.day_edges, "Upper day edges for fixed binning");
}

void add_experiment_options(CLI::App& cmd, ExperimentOptions& e) {
  cmd.add_option("--warmup", e.warmup, "Initial training instances");
  cmd.add_option("--window", e.window, "Rolling accuracy window");
  cmd.add_option("--mini-batch", e.mini_batch, "Incremental update cadence");
  cmd.add_option("--mixed-fraction", e.mixed_fraction, "Share of a mixed batch taken before the alarm");
}

void add_detector_parameters(CLI::App& cmd, DetectorOptions& d) {
  cmd.add_option("--lambda", d.lambda, "Page-Hinkley alarm threshold");
  cmd.add_option("--ph-delta", d.ph_delta, "Page-Hinkley tolerated change");
  cmd.add_option("--burn-in", d.burn_in, "Page-Hinkley burn-in observations");
  cmd.add_option("--delta", d.adwin_delta, "ADWIN confidence");
}

DetectorConfig detector_config(DetectorKind kind, const DetectorOptions& d) {
  DetectorConfig c;
  c.kind = kind;
  c.page_hinkley = {d.ph_delta, d.lambda, d.burn_in};
  c.adwin.delta = d.adwin_delta;
  return c;
}

// ---------------------------------------------------------------------------
// Data loading.

struct LoadedData {
  FeatureSchema schema;
  PreprocessConfig preprocess;
  std::vector<LabeledInstance> instances;
  std::size_t unlabeled = 0;
  std::optional<BinBoundaries> bins;
  std::optional<SynthStream> synth;
  std::string source;
};

SynthConfig synth_config(const std::string& profile, const SynthOptions& o, std::uint64_t seed) {
  SynthConfig c;
  if (profile == "paper-like") {
    c = paper_like_profile(seed);
  } else if (profile == "no-drift") {
    c = paper_like_profile(seed);
    c.drift.clear();
  } else {
    throw ConfigError("unknown synthetic profile '" + profile + "'");
  }
  if (o.n) c.n_instances = *o.n;
  if (o.drift_at || o.drift_kind || o.drift_width || o.magnitude) {
    if (c.drift.empty()) c.drift.push_back({DriftKind::sudden, c.n_instances / 2, 0, 0.9});
    auto& d = c.drift.front();
    if (o.drift_kind) {
      if (*o.drift_kind == "sudden") d.kind = DriftKind::sudden;
      else if (*o.drift_kind == "gradual") d.kind = DriftKind::gradual;
      else if (*o.drift_kind == "recurring") d.kind = DriftKind::recurring;
      else if (*o.drift_kind == "none") d.kind = DriftKind::none;
      else throw ConfigError("unknown drift kind '" + *o.drift_kind + "'");
    }
    if (o.drift_at) d.position = *o.drift_at;
    if (o.drift_width) d.width = *o.drift_width;
    if (o.magnitude) d.magnitude = *o.magnitude;
  }
  c.validate();
  return c;
}

PreprocessConfig parse_preprocess(const std::optional<std::string>& truncate,
                                  const std::optional<std::string>& boxcox, PreprocessConfig defaults) {
  PreprocessConfig p = std::move(defaults);
  if (truncate) {
    p.truncate.clear();
    for (const auto& item : split_list(*truncate)) {
      const auto colon = item.rfind(':');
      std::int64_t len = 0;
      if (colon == std::string::npos || !parse_int(item.substr(colon + 1), len) || len < 1)
        throw ConfigError("--truncate expects name:length, got '" + item + "'");
      p.truncate[item.substr(0, colon)] = static_cast<std::size_t>(len);
    }
  }
  if (boxcox) {
    p.boxcox.clear();
    for (const auto& name : split_list(*boxcox)) p.boxcox.insert(name);
  }
  return p;
}

PreprocessConfig synth_preprocess_defaults() {
  PreprocessConfig p;
  p.truncate["material_class"] = 4;
  p.boxcox.insert("order_value");
  return p;
}

LoadedData load_data(const SourceOptions& s, const GlobalOptions& g, std::size_t warmup, bool allow_stdin) {
  if (s.input.empty() == s.synth.empty()) throw ConfigError("exactly one of --input and --synth is required");
  LoadedData data;
  if (!s.synth.empty()) {
    data.synth = generate(synth_config(s.synth, s.synth_overrides, g.seed));
    data.schema = data.synth->schema;
    data.instances = data.synth->instances;
    data.preprocess = parse_preprocess(s.truncate, s.boxcox, synth_preprocess_defaults());
    data.source = "synth:" + s.synth;
    return data;
  }

  data.source = s.input;
  std::string buffered;
  auto open = [&]() -> std::unique_ptr<std::istream> {
    if (s.input == "-") return std::make_unique<std::istringstream>(buffered);
    return open_input(s.input);
  };
  if (s.input == "-") {
    if (!allow_stdin) throw ConfigError("this command replays its input; standard input is not replayable");
    std::ostringstream slurp;
    slurp << std::cin.rdbuf();
    buffered = slurp.str();
  } else if (!fs::exists(s.input)) {
    throw IoError("input file not found: " + s.input);
  }

  std::vector<std::string> header;
  CsvReader(open()).next_row(header);

  data.schema.label_column = s.label;
  data.schema.num_classes = s.classes;
  const auto categorical = split_list(s.categorical);
  const auto numeric = split_list(s.numeric);
  if (categorical.empty() && numeric.empty()) {
    for (const auto& col : header)
      if (col != s.label) data.schema.features.push_back({col, FeatureKind::categorical});
  } else {
    for (const auto& c : categorical) data.schema.features.push_back({c, FeatureKind::categorical});
    for (const auto& c : numeric) data.schema.features.push_back({c, FeatureKind::numeric});
  }
  data.preprocess = parse_preprocess(s.truncate, s.boxcox, {});

  LabelDecoder decoder;
  if (s.label_hours) {
    if (s.bins == "fixed") {
      data.bins = fit_target_bins({}, BinMode::fixed_days, parse_number_list("day-edges", s.day_edges));
    } else if (s.bins == "tertile") {
      // Fit on the warm-up rows only.
      CsvReader reader(open());
      std::vector<std::string> row;
      reader.next_row(row);
      const auto it = std::find(header.begin(), header.end(), s.label);
      if (it == header.end()) throw SchemaError("missing column '" + s.label + "'");
      const auto col = static_cast<std::size_t>(it - header.begin());
      std::vector<double> hours;
      while (hours.size() < warmup && reader.next_row(row)) {
        if (col >= row.size() || row[col].empty()) continue;
        double h = 0.0;
        if (!parse_double(row[col], h)) throw ParseError("throughput '" + row[col] + "' is not numeric", reader.line());
        hours.push_back(h);
      }
      data.bins = fit_target_bins(hours, BinMode::tertile);
    } else {
      throw ConfigError("unknown binning mode '" + s.bins + "'");
    }
    if (data.bins->num_classes() != s.classes)
      throw ConfigError("binning yields " + std::to_string(data.bins->num_classes()) + " classes, --classes is " +
                        std::to_string(s.classes));
    decoder = [bins = *data.bins](std::string_view token, std::int64_t row) {
      double h = 0.0;
      if (!parse_double(token, h)) throw ParseError("throughput '" + std::string(token) + "' is not numeric", row);
      if (h < 0.0) throw ParseError("negative throughput time", row);
      return bin_target(h, bins);
    };
  }

  CsvStream stream = CsvStream::from_istream(open(), data.schema, decoder);
  while (auto rec = stream.next()) {
    if (rec->label)
      data.instances.push_back({std::move(rec->instance), *rec->label});
    else
      ++data.unlabeled;
  }
  return data;
}

// ---------------------------------------------------------------------------
// Output.

fs::path resolve_out_dir(const GlobalOptions& g) {
  if (!g.out.empty()) return g.out;
  if (const char* env = std::getenv("DRIFTSTREAM_OUT"); env && *env) return env;
  return kDefaultOutDir;
}

fs::path prepare_out_dir(const GlobalOptions& g) {
  const fs::path dir = resolve_out_dir(g);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::string strategy_name(const std::optional<Strategy>& s) {
  return s ? std::string(to_string(*s)) : std::string("none");
}

const std::vector<std::string> kSummaryHeader{"detector",      "batch_size", "strategy",  "incremental",
                                              "accuracy",      "n_predictions", "n_drifts", "n_retrains",
                                              "performance_increase"};

std::vector<std::string> summary_row(DetectorKind detector, std::size_t batch, const std::optional<Strategy>& s,
                                     bool incremental, const ExperimentSummary& summary) {
  return {std::string(to_string(detector)),
          detector == DetectorKind::none ? std::string("-") : std::to_string(batch),
          strategy_name(s),
          incremental ? "true" : "false",
          format_fixed6(summary.accuracy),
          std::to_string(summary.n_predictions),
          std::to_string(summary.n_drifts),
          std::to_string(summary.n_retrains),
          summary.performance_increase ? format_fixed6(*summary.performance_increase) : std::string()};
}

void write_run_outputs(const fs::path& dir, const ExperimentResult& result, const ExperimentConfig& config) {
  {
    CsvFile f(dir / "records.csv");
    auto& o = f.stream();
    o << "index,predicted,actual,correct,rolling_accuracy,drift_flag,retrain_flag\n";
    for (const auto& r : result.records)
      o << r.index << ',' << r.predicted.id << ',' << r.actual.id << ',' << (r.correct ? 1 : 0) << ','
        << format_fixed6(r.rolling_accuracy) << ',' << (r.drift ? 1 : 0) << ',' << (r.retrain ? 1 : 0) << '\n';
    f.close();
  }
  {
    CsvFile f(dir / "curves.csv");
    auto& o = f.stream();
    o << "index,rolling_accuracy\n";
    for (const auto& r : result.records) o << r.index << ',' << format_fixed6(r.rolling_accuracy) << '\n';
    f.close();
  }
  const auto& a = config.adaptation;
  {
    CsvFile f(dir / "events.csv");
    auto& o = f.stream();
    o << "index,event,detector,strategy,batch_size,statistic\n";
    for (const auto& e : result.events)
      o << e.index << ',' << to_string(e.kind) << ',' << to_string(a.detector.kind) << ','
        << strategy_name(a.strategy) << ',' << a.batch_size << ',' << format_fixed6(e.statistic) << '\n';
    f.close();
  }
  {
    CsvFile f(dir / "summary.csv");
    write_csv_row(f.stream(), kSummaryHeader);
    write_csv_row(f.stream(), summary_row(a.detector.kind, a.batch_size, a.strategy, a.incremental, result.summary));
    f.close();
  }
  {
    CsvFile f(dir / "confusion.csv");
    auto& o = f.stream();
    o << "actual,predicted,count\n";
    for (std::size_t i = 0; i < result.summary.confusion.size(); ++i)
      for (std::size_t j = 0; j < result.summary.confusion[i].size(); ++j)
        o << i << ',' << j << ',' << result.summary.confusion[i][j] << '\n';
    f.close();
  }
}

json source_json(const SourceOptions& s, const LoadedData& data) {
  json truncate = json::object();
  for (const auto& [k, v] : data.preprocess.truncate) truncate[k] = v;
  json features = json::array();
  for (const auto& f : data.schema.features)
    features.push_back({{"name", f.name}, {"kind", f.kind == FeatureKind::numeric ? "numeric" : "categorical"}});
  json doc = {{"source", data.source},
              {"label", data.schema.label_column},
              {"classes", data.schema.num_classes},
              {"features", features},
              {"truncate", truncate},
              {"boxcox", std::vector<std::string>(data.preprocess.boxcox.begin(), data.preprocess.boxcox.end())},
              {"label_hours", s.label_hours},
              {"instances", data.instances.size()},
              {"unlabeled_skipped", data.unlabeled}};
  if (data.bins) doc["bins"] = bins_to_json(*data.bins);
  if (data.synth) {
    const auto& o = s.synth_overrides;
    doc["synth"] = {{"profile", s.synth}};
    if (o.n) doc["synth"]["n"] = *o.n;
    if (o.drift_at) doc["synth"]["drift_at"] = *o.drift_at;
    if (o.drift_kind) doc["synth"]["drift_kind"] = *o.drift_kind;
    if (o.drift_width) doc["synth"]["drift_width"] = *o.drift_width;
    if (o.magnitude) doc["synth"]["magnitude"] = *o.magnitude;
  }
  return doc;
}

json detector_json(const DetectorConfig& d) {
  return {{"kind", std::string(to_string(d.kind))},
          {"lambda", d.page_hinkley.lambda},
          {"ph_delta", d.page_hinkley.delta},
          {"burn_in", d.page_hinkley.burn_in},
          {"adwin_delta", d.adwin.delta},
          {"adwin_max_buckets", d.adwin.max_buckets},
          {"adwin_check_period", d.adwin.check_period}};
}

json experiment_json(const ExperimentConfig& c) {
  return {{"warmup", c.warmup},
          {"window", c.rolling_window},
          {"detector", detector_json(c.adaptation.detector)},
          {"strategy", strategy_name(c.adaptation.strategy)},
          {"batch_size", c.adaptation.batch_size},
          {"incremental", c.adaptation.incremental},
          {"mini_batch", c.adaptation.mini_batch},
          {"mixed_pre_fraction", c.adaptation.mixed_pre_fraction},
          {"nb_alpha", c.adaptation.nb.alpha},
          {"nb_var_floor", c.adaptation.nb.var_floor}};
}

ExperimentConfig base_experiment(const ExperimentOptions& e) {
  ExperimentConfig c;
  c.warmup = e.warmup;
  c.rolling_window = e.window;
  c.adaptation.mini_batch = e.mini_batch;
  c.adaptation.mixed_pre_fraction = e.mixed_fraction;
  return c;
}

void report_unlabeled(const LoadedData& data, const GlobalOptions& g, std::ostream& err) {
  if (data.unlabeled && !g.quiet)
    err << "note: skipped " << data.unlabeled << " unlabeled row(s); they cannot be scored\n";
}

// ---------------------------------------------------------------------------
// Commands.

struct RunCommand {
  SourceOptions source;
  ExperimentOptions experiment;
  DetectorOptions detector;
  std::string strategy;
  std::size_t batch_size = 500;
  bool incremental = false;
  std::optional<double> baseline_accuracy;

  int execute(const GlobalOptions& g, std::ostream& out, std::ostream& err) const {
    ExperimentConfig config = base_experiment(experiment);
    const DetectorKind kind = detector.detector.empty() ? DetectorKind::none : parse_detector_kind(detector.detector);
    config.adaptation.detector = detector_config(kind, detector);
    if (!strategy.empty()) config.adaptation.strategy = parse_strategy(strategy);
    else if (kind != DetectorKind::none) config.adaptation.strategy = Strategy::last;
    config.adaptation.batch_size = batch_size;
    config.adaptation.incremental = incremental;
    config.validate();
    if (baseline_accuracy && !(*baseline_accuracy > 0.0 && *baseline_accuracy <= 1.0))
      throw ConfigError("--baseline-accuracy must lie in (0, 1]");

    const fs::path dir = prepare_out_dir(g);
    LoadedData data = load_data(source, g, config.warmup, true);
    report_unlabeled(data, g, err);
    const PreparedStream prepared = prepare(data.schema, data.instances, data.preprocess, config.warmup);
    ExperimentResult result = run_experiment(prepared, config);
    if (baseline_accuracy) result.summary.performance_increase = performance_increase(result.summary.accuracy, *baseline_accuracy);

    json resolved = {{"command", "run"},
                     {"seed", g.seed},
                     {"data", source_json(source, data)},
                     {"experiment", experiment_json(config)}};
    write_json(dir / "resolved-config.json", resolved);
    write_run_outputs(dir, result, config);
    json encoder_doc = prepared.encoder.to_json();
    if (data.bins) encoder_doc["target_bins"] = bins_to_json(*data.bins);
    write_json(dir / "encoder.json", encoder_doc);
    if (result.final_model) write_json(dir / "model.json", result.final_model->to_json());

    if (!g.quiet)
      out << "accuracy=" << format_fixed6(result.summary.accuracy) << " predictions=" << result.summary.n_predictions
          << " drifts=" << result.summary.n_drifts << " retrains=" << result.summary.n_retrains << " out=" << dir.string()
          << '\n';
    return kExitOk;
  }
};

struct GenerateCommand {
  std::string profile = "paper-like";
  SynthOptions overrides;

  int execute(const GlobalOptions& g, std::ostream& out, std::ostream&) const {
    const SynthConfig config = synth_config(profile, overrides, g.seed);
    const fs::path dir = prepare_out_dir(g);
    const SynthStream stream = generate(config);
    write_csv(stream, dir / "stream.csv");
    write_concepts_csv(stream, dir / "concepts.csv");

    // Config file that replays the stream through `run --config`.
    std::ofstream cfg(dir / "schema.cfg", std::ios::binary);
    std::vector<std::string> cats, nums;
    for (const auto& f : stream.schema.features)
      (f.kind == FeatureKind::categorical ? cats : nums).push_back(f.name);
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
      return s;
    };
    cfg << "# generated by `driftstream generate --profile " << profile << " --seed " << g.seed << "`\n"
        << "input=" << (dir / "stream.csv").string() << '\n'
        << "label=" << stream.schema.label_column << '\n'
        << "classes=" << stream.schema.num_classes << '\n'
        << "categorical=" << join(cats) << '\n'
        << "numeric=" << join(nums) << '\n'
        << "truncate=material_class:4\n"
        << "boxcox=order_value\n";
    if (!cfg) throw IoError("write failed for " + (dir / "schema.cfg").string());

    if (!g.quiet)
      out << "wrote " << stream.instances.size() << " instances to " << (dir / "stream.csv").string() << '\n';
    return kExitOk;
  }
};

struct GridCommand {
  SourceOptions source;
  ExperimentOptions experiment;
  DetectorOptions detector;
  std::string strategy = "last";
  std::size_t batch_size = 500;
  bool incremental = false;
  std::size_t prefix = 10000;
  std::optional<std::string> lambdas, ph_deltas, burn_ins, adwin_deltas, batch_sizes;
  int workers = 1;

  int execute(const GlobalOptions& g, std::ostream& out, std::ostream& err) const {
    if (detector.detector.empty()) throw ConfigError("gridsearch requires --detector");
    std::vector<GridAxis> axes;
    auto axis = [&](const char* flag, const char* name, const std::optional<std::string>& text) {
      if (text) axes.push_back({name, parse_number_list(flag, *text)});
    };
    axis("lambda", "lambda", lambdas);
    axis("ph-delta", "ph_delta", ph_deltas);
    axis("burn-in", "burn_in", burn_ins);
    axis("delta", "adwin_delta", adwin_deltas);
    axis("batch-sizes", "batch_size", batch_sizes);
    const auto grid = expand_grid(axes);

    ExperimentConfig config = base_experiment(experiment);
    config.adaptation.detector = detector_config(parse_detector_kind(detector.detector), detector);
    config.adaptation.strategy = parse_strategy(strategy);
    config.adaptation.batch_size = batch_size;
    config.adaptation.incremental = incremental;
    config.validate();
    for (const auto& p : grid) apply_grid_point(config, p).validate();

    const fs::path dir = prepare_out_dir(g);
    LoadedData data = load_data(source, g, config.warmup, false);
    report_unlabeled(data, g, err);
    if (prefix > data.instances.size())
      throw ConfigError("--prefix " + std::to_string(prefix) + " exceeds the stream length " +
                        std::to_string(data.instances.size()));
    const std::span<const LabeledInstance> head(data.instances.data(), prefix);
    const PreparedStream prepared = prepare(data.schema, head, data.preprocess, config.warmup);
    const GridResult result = grid_search(prepared, prefix, grid, config, workers);

    {
      CsvFile f(dir / "grid.csv");
      std::vector<std::string> header;
      for (const auto& [name, _] : grid.front()) header.push_back(name);
      for (const char* c : {"accuracy", "n_predictions", "n_drifts", "n_retrains"}) header.emplace_back(c);
      write_csv_row(f.stream(), header);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<std::string> row;
        for (const auto& [_, v] : grid[i]) row.push_back(format_roundtrip(v));
        const auto& s = result.summaries[i];
        row.push_back(format_fixed6(s.accuracy));
        row.push_back(std::to_string(s.n_predictions));
        row.push_back(std::to_string(s.n_drifts));
        row.push_back(std::to_string(s.n_retrains));
        write_csv_row(f.stream(), row);
      }
      f.close();
    }
    json params = json::object();
    for (const auto& [name, v] : grid[result.best]) params[name] = v;
    const auto& best = result.summaries[result.best];
    write_json(dir / "best.json", {{"params", params},
                                   {"accuracy", best.accuracy},
                                   {"n_drifts", best.n_drifts},
                                   {"n_retrains", best.n_retrains},
                                   {"prefix", prefix},
                                   {"grid_size", grid.size()}});
    write_json(dir / "resolved-config.json", {{"command", "gridsearch"},
                                              {"seed", g.seed},
                                              {"prefix", prefix},
                                              {"data", source_json(source, data)},
                                              {"experiment", experiment_json(config)}});
    if (!g.quiet)
      out << "best: " << describe(grid[result.best]) << " accuracy=" << format_fixed6(best.accuracy) << '\n';
    return kExitOk;
  }
};

struct MatrixCommand {
  SourceOptions source;
  ExperimentOptions experiment;
  DetectorOptions detector;
  std::string detectors = "page-hinkley,adwin";
  std::string batch_sizes = "500,1000,2000,5000";
  std::string strategies = "last,mixed,next";
  bool incremental = true;
  int workers = 0;

  int execute(const GlobalOptions& g, std::ostream& out, std::ostream& err) const {
    MatrixSpec spec;
    spec.detectors.clear();
    for (const auto& name : split_list(detectors)) {
      const DetectorKind kind = parse_detector_kind(name);
      if (kind == DetectorKind::none) throw ConfigError("matrix detectors must not include 'none'");
      spec.detectors.push_back(detector_config(kind, detector));
    }
    spec.batch_sizes = parse_count_list("batch-sizes", batch_sizes);
    spec.strategies.clear();
    for (const auto& name : split_list(strategies)) spec.strategies.push_back(parse_strategy(name));
    spec.incremental = incremental;
    spec.baseline_detector = detector_config(DetectorKind::page_hinkley, detector);
    if (workers < 0) throw ConfigError("--workers must be >= 0");

    ExperimentConfig config = base_experiment(experiment);
    const auto cells = matrix_cells(config, spec);  // validates before any work

    const fs::path dir = prepare_out_dir(g);
    LoadedData data = load_data(source, g, config.warmup, false);
    report_unlabeled(data, g, err);
    const PreparedStream prepared = prepare(data.schema, data.instances, data.preprocess, config.warmup);
    const auto results = experiment_matrix(prepared, config, spec, workers);

    {
      CsvFile f(dir / "summary.csv");
      write_csv_row(f.stream(), kSummaryHeader);
      for (const auto& c : results)
        write_csv_row(f.stream(), summary_row(c.detector, c.batch_size, c.strategy, c.incremental, c.summary));
      f.close();
    }
    {
      CsvFile f(dir / "pivot.csv");
      std::vector<std::string> header{"detector", "batch_size", "incremental"};
      for (Strategy s : spec.strategies) header.emplace_back(to_string(s));
      write_csv_row(f.stream(), header);
      for (const auto& det : spec.detectors)
        for (std::size_t batch : spec.batch_sizes) {
          std::vector<std::string> row{std::string(to_string(det.kind)), std::to_string(batch),
                                       incremental ? "true" : "false"};
          for (Strategy s : spec.strategies)
            for (const auto& c : results)
              if (!c.baseline && c.detector == det.kind && c.batch_size == batch && c.strategy == s)
                row.push_back(format_fixed6(c.summary.accuracy));
          write_csv_row(f.stream(), row);
        }
      f.close();
    }
    json resolved = {{"command", "matrix"},
                     {"seed", g.seed},
                     {"data", source_json(source, data)},
                     {"experiment", experiment_json(config)},
                     {"detectors", split_list(detectors)},
                     {"batch_sizes", spec.batch_sizes},
                     {"strategies", split_list(strategies)},
                     {"incremental", incremental},
                     {"cells", cells.size()}};
    write_json(dir / "resolved-config.json", resolved);

    if (!g.quiet) {
      for (const auto& c : results) {
        out << std::string(to_string(c.detector)) << ' ' << (c.detector == DetectorKind::none ? std::string("-") : std::to_string(c.batch_size))
            << ' ' << strategy_name(c.strategy) << ' ' << (c.incremental ? "incremental" : "static-updates") << ' '
            << format_fixed6(c.summary.accuracy) << '\n';
      }
    }
    return kExitOk;
  }
};

struct InspectCommand {
  SourceOptions source;
  std::string feature;
  std::size_t window = 1000;

  int execute(const GlobalOptions& g, std::ostream& out, std::ostream&) const {
    if (feature.empty()) throw ConfigError("inspect requires --feature");
    if (window == 0) throw ConfigError("--window must be >= 1");
    if (source.input.empty() == source.synth.empty())
      throw ConfigError("exactly one of --input and --synth is required");

    std::vector<double> series;
    std::vector<std::int64_t> index;
    if (!source.synth.empty()) {
      const SynthStream stream = generate(synth_config(source.synth, source.synth_overrides, g.seed));
      std::optional<std::size_t> column = stream.schema.find(feature);
      if (feature == stream.hidden_name && !stream.hidden.empty()) {
        series = stream.hidden;
      } else if (column && stream.schema.features[*column].kind == FeatureKind::numeric) {
        for (const auto& li : stream.instances) series.push_back(std::get<double>(li.instance.values[*column]));
      } else if (column) {
        throw ConfigError("feature '" + feature + "' is not numeric");
      } else {
        throw ConfigError("unknown feature '" + feature + "'");
      }
      for (const auto& li : stream.instances) index.push_back(li.instance.index);
    } else {
      if (source.input == "-") throw ConfigError("inspect reads a file; standard input is not supported");
      if (!fs::exists(source.input)) throw IoError("input file not found: " + source.input);
      CsvReader reader(open_input(source.input));
      std::vector<std::string> row;
      if (!reader.next_row(row)) throw ConfigError("unknown feature '" + feature + "' (empty file)");
      const auto it = std::find(row.begin(), row.end(), feature);
      if (it == row.end()) throw ConfigError("unknown feature '" + feature + "'");
      const auto col = static_cast<std::size_t>(it - row.begin());
      std::int64_t i = 0;
      while (reader.next_row(row)) {
        if (row.size() == 1 && row[0].empty()) continue;
        double v = 0.0;
        if (col >= row.size() || !parse_double(row[col], v))
          throw ConfigError("feature '" + feature + "' is not numeric (line " + std::to_string(reader.line()) + ")");
        series.push_back(v);
        index.push_back(i++);
      }
    }

    const auto means = rolling_mean(series, window);
    const fs::path dir = prepare_out_dir(g);
    CsvFile f(dir / "inspect.csv");
    f.stream() << "index,rolling_mean\n";
    for (std::size_t i = 0; i < means.size(); ++i) f.stream() << index[i] << ',' << format_fixed6(means[i]) << '\n';
    f.close();
    if (!g.quiet) out << "wrote " << means.size() << " rolling means of '" << feature << "' to " << (dir / "inspect.csv").string() << '\n';
    return kExitOk;
  }
};

// Expands `--config FILE` into `--key=value` arguments placed right after the
// subcommand, so explicit flags (parsed later) take precedence.
std::vector<std::string> expand_config_file(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::vector<std::string> injected;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key = line.substr(first, eq - first);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    if (key == "config") continue;
    injected.push_back("--" + key + "=" + value);
  }
  std::vector<std::string> out = args;
  auto cmd = std::find_if(out.begin(), out.end(), [](const std::string& a) {
    return std::find(kCommands.begin(), kCommands.end(), a) != kCommands.end();
  });
  const auto pos = cmd == out.end() ? out.begin() : cmd + 1;
  out.insert(pos, injected.begin(), injected.end());
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drift-aware stream learning: detection, retraining strategies, prequential evaluation"};
  app.name("driftstream");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions globals;
  add_global_options(app, globals);

  RunCommand run;
  auto* run_cmd = app.add_subcommand("run", "Prequential run of one configuration");
  add_source_options(*run_cmd, run.source);
  add_experiment_options(*run_cmd, run.experiment);
  run_cmd->add_option("--detector", run.detector.detector, "none | page-hinkley | adwin");
  add_detector_parameters(*run_cmd, run.detector);
  run_cmd->add_option("--strategy", run.strategy, "last | mixed | next");
  run_cmd->add_option("--batch-size", run.batch_size, "Retraining batch size");
  run_cmd->add_flag("--incremental", run.incremental, "Incremental mini-batch updates");
  run_cmd->add_option("--baseline-accuracy", run.baseline_accuracy, "Report the relative gain over this accuracy");

  GenerateCommand gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic drift stream and its concept sidecar");
  gen_cmd->add_option("--profile", gen.profile, "paper-like | no-drift");
  add_synth_overrides(*gen_cmd, gen.overrides);

  GridCommand grid;
  auto* grid_cmd = app.add_subcommand("gridsearch", "Detector parameter grid search on a stream prefix");
  add_source_options(*grid_cmd, grid.source);
  add_experiment_options(*grid_cmd, grid.experiment);
  grid_cmd->add_option("--detector", grid.detector.detector, "page-hinkley | adwin");
  grid_cmd->add_option("--strategy", grid.strategy, "last | mixed | next");
  grid_cmd->add_option("--batch-size", grid.batch_size, "Retraining batch size");
  grid_cmd->add_flag("--incremental", grid.incremental, "Incremental mini-batch updates");
  grid_cmd->add_option("--prefix", grid.prefix, "Instances (incl. warm-up) scored per grid point");
  grid_cmd->add_option("--lambda", grid.lambdas, "Page-Hinkley thresholds, comma-separated");
  grid_cmd->add_option("--ph-delta", grid.ph_deltas, "Page-Hinkley deltas, comma-separated");
  grid_cmd->add_option("--burn-in", grid.burn_ins, "Page-Hinkley burn-ins, comma-separated");
  grid_cmd->add_option("--delta", grid.adwin_deltas, "ADWIN deltas, comma-separated");
  grid_cmd->add_option("--batch-sizes", grid.batch_sizes, "Batch sizes, comma-separated");
  grid_cmd->add_option("--workers", grid.workers, "Parallel workers (0 = all available)");

  MatrixCommand matrix;
  auto* matrix_cmd = app.add_subcommand("matrix", "Detector x batch size x strategy experiment grid");
  add_source_options(*matrix_cmd, matrix.source);
  add_experiment_options(*matrix_cmd, matrix.experiment);
  add_detector_parameters(*matrix_cmd, matrix.detector);
  matrix_cmd->add_option("--detectors", matrix.detectors, "Detectors, comma-separated");
  matrix_cmd->add_option("--batch-sizes", matrix.batch_sizes, "Batch sizes, comma-separated");
  matrix_cmd->add_option("--strategies", matrix.strategies, "Strategies, comma-separated");
  matrix_cmd->add_flag("--incremental,!--no-incremental", matrix.incremental, "Incremental updates in grid cells");
  matrix_cmd->add_option("--workers", matrix.workers, "Parallel workers (0 = all available)");

  InspectCommand inspect;
  auto* inspect_cmd = app.add_subcommand("inspect", "Rolling mean of one numeric column");
  add_source_options(*inspect_cmd, inspect.source);
  inspect_cmd->add_option("--feature", inspect.feature, "Numeric column to summarise");
  inspect_cmd->add_option("--window", inspect.window, "Rolling window");

  try {
    const std::vector<std::string> args = expand_config_file(raw_args);
    std::vector<const char*> argv{"driftstream"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return kExitOk;
      }
      err << "error: " << e.what() << '\n';
      return kExitConfig;
    }

    if (run_cmd->parsed()) return run.execute(globals, out, err);
    if (gen_cmd->parsed()) return gen.execute(globals, out, err);
    if (grid_cmd->parsed()) return grid.execute(globals, out, err);
    if (matrix_cmd->parsed()) return matrix.execute(globals, out, err);
    if (inspect_cmd->parsed()) return inspect.execute(globals, out, err);
    err << "error: no command given\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace driftstream
