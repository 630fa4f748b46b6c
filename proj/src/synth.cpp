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

#include "driftstream/synth.hpp"

#include <algorithm>
#include <cmath>

#include "driftstream/error.hpp"
#include "driftstream/rng.hpp"

namespace driftstream {

namespace {

constexpr double kHiddenLow = 0.30;
constexpr double kHiddenHigh = 0.55;
constexpr double kHiddenNoise = 0.06;

std::vector<DriftSpec> effective_drifts(const SynthConfig& config) {
  std::vector<DriftSpec> out;
  for (const auto& d : config.drift)
    if (d.kind != DriftKind::none) out.push_back(d);
  return out;
}

Concept draw_concept(const SynthConfig& config, Rng rng) {
  Concept c;
  const int k_classes = config.n_classes;
  for (std::size_t f = 0; f < config.categorical.size(); ++f) {
    Rng frng = rng.split("categorical", f);
    const int card = config.categorical[f].cardinality;
    std::vector<std::vector<double>> table(k_classes, std::vector<double>(card));
    for (auto& row : table) {
      double sum = 0.0;
      for (auto& p : row) {
        p = std::exp(config.table_concentration * frng.normal());
        sum += p;
      }
      for (auto& p : row) p /= sum;
    }
    c.category_probs.push_back(std::move(table));
  }
  for (std::size_t f = 0; f < config.numeric.size(); ++f) {
    Rng nrng = rng.split("numeric", f);
    std::vector<double> means(k_classes);
    for (auto& m : means) m = config.numeric_separation * nrng.normal();
    c.numeric_means.push_back(std::move(means));
  }
  return c;
}

Concept blend(const Concept& from, const Concept& to, double m) {
  Concept out = from;
  for (std::size_t f = 0; f < out.category_probs.size(); ++f)
    for (std::size_t k = 0; k < out.category_probs[f].size(); ++k)
      for (std::size_t j = 0; j < out.category_probs[f][k].size(); ++j)
        out.category_probs[f][k][j] =
            (1.0 - m) * from.category_probs[f][k][j] + m * to.category_probs[f][k][j];
  for (std::size_t f = 0; f < out.numeric_means.size(); ++f)
    for (std::size_t k = 0; k < out.numeric_means[f].size(); ++k)
      out.numeric_means[f][k] = (1.0 - m) * from.numeric_means[f][k] + m * to.numeric_means[f][k];
  return out;
}

int sample_category(const std::vector<double>& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    acc += probs[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(probs.size()) - 1;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_instances <= 0) throw ConfigError("n_instances must be > 0");
  if (n_classes < 2) throw ConfigError("n_classes must be >= 2");
  if (categorical.empty() && numeric.empty())
    throw ConfigError("at least one categorical or numeric feature is required");
  for (const auto& c : categorical)
    if (c.cardinality < 1 || c.cardinality > 9000 || c.code_suffix_digits < 0)
      throw ConfigError("categorical feature '" + c.name + "' has invalid cardinality");
  std::int64_t last_position = -1;
  for (const auto& d : drift) {
    if (d.kind == DriftKind::none) continue;
    if (d.position < 0 || d.position >= n_instances)
      throw ConfigError("drift position " + std::to_string(d.position) + " outside [0, " +
                        std::to_string(n_instances) + ")");
    if (d.width < 0) throw ConfigError("drift width must be >= 0");
    if (d.kind == DriftKind::sudden && d.width != 0)
      throw ConfigError("sudden drift must have width 0");
    if (d.kind == DriftKind::recurring && d.width == 0)
      throw ConfigError("recurring drift needs a period (width > 0)");
    if (!(d.magnitude >= 0.0 && d.magnitude <= 1.0))
      throw ConfigError("drift magnitude must lie in [0, 1]");
    if (d.position <= last_position) throw ConfigError("drift positions must be strictly ascending");
    last_position = d.position;
  }
  FeatureSchema probe;
  for (const auto& c : categorical) probe.features.push_back({c.name, FeatureKind::categorical});
  for (const auto& n : numeric) probe.features.push_back({n.name, FeatureKind::numeric});
  if (hidden_context) {
    if (probe.find(hidden_name)) throw ConfigError("hidden feature name collides with a feature");
    probe.features.push_back({hidden_name, FeatureKind::numeric});
  }
  probe.num_classes = n_classes;
  probe.validate();
}

SynthConfig make_synth_config(std::int64_t n_instances, int n_categorical, int n_numeric,
                              int n_classes, std::uint64_t seed) {
  SynthConfig c;
  c.n_instances = n_instances;
  c.n_classes = n_classes;
  c.seed = seed;
  for (int i = 0; i < n_categorical; ++i) c.categorical.push_back({"cat" + std::to_string(i), 8, 0});
  for (int i = 0; i < n_numeric; ++i) c.numeric.push_back({"num" + std::to_string(i), false, 0.0});
  return c;
}

SynthConfig paper_like_profile(std::uint64_t seed) {
  SynthConfig c;
  c.n_instances = 70774;
  c.n_classes = 3;
  c.seed = seed;
  c.categorical = {
      {"supplier", 30, 0},
      {"material_class", 20, 4},
      {"plant", 6, 0},
      {"purchasing_group", 12, 0},
      {"document_type", 4, 0},
  };
  c.numeric = {{"order_value", true, 6.0}};
  c.drift = {{DriftKind::sudden, 35000, 0, 0.9}};
  c.hidden_context = true;
  c.table_concentration = 1.5;
  c.numeric_separation = 0.8;
  return c;
}

std::vector<Concept> build_concepts(const SynthConfig& config) {
  const Rng root(config.seed);
  std::vector<Concept> concepts;
  concepts.push_back(draw_concept(config, root.split("concept", 0)));
  const auto drifts = effective_drifts(config);
  for (std::size_t j = 0; j < drifts.size(); ++j) {
    Concept fresh = draw_concept(config, root.split("concept", j + 1));
    concepts.push_back(blend(concepts.back(), fresh, drifts[j].magnitude));
  }
  return concepts;
}

std::vector<int> concept_schedule(const SynthConfig& config) {
  config.validate();
  const auto drifts = effective_drifts(config);
  Rng rng = Rng(config.seed).split("schedule");
  std::vector<int> ids(static_cast<std::size_t>(config.n_instances), 0);
  for (std::int64_t i = 0; i < config.n_instances; ++i) {
    int id = 0;
    for (std::size_t j = 0; j < drifts.size(); ++j) {
      const auto& d = drifts[j];
      if (i < d.position) break;
      const int before = id;
      const int after = static_cast<int>(j) + 1;
      const std::int64_t offset = i - d.position;
      switch (d.kind) {
        case DriftKind::sudden:
          id = after;
          break;
        case DriftKind::gradual:
          if (offset >= d.width) {
            id = after;
          } else {
            const double p = static_cast<double>(offset) / static_cast<double>(d.width);
            id = rng.uniform() < p ? after : before;
          }
          break;
        case DriftKind::recurring:
          id = (offset / d.width) % 2 == 0 ? after : before;
          break;
        case DriftKind::none:
          break;
      }
    }
    ids[static_cast<std::size_t>(i)] = id;
  }
  return ids;
}

std::string category_code(int k) { return std::to_string(1000 + k); }

SynthStream generate(const SynthConfig& config) {
  config.validate();
  const auto concepts = build_concepts(config);
  SynthStream out;
  for (const auto& c : config.categorical) out.schema.features.push_back({c.name, FeatureKind::categorical});
  for (const auto& n : config.numeric) out.schema.features.push_back({n.name, FeatureKind::numeric});
  out.schema.num_classes = config.n_classes;
  out.concept_ids = concept_schedule(config);
  if (config.hidden_context) out.hidden_name = config.hidden_name;

  const Rng root(config.seed);
  Rng label_rng = root.split("labels");
  std::vector<Rng> cat_rngs, suffix_rngs, num_rngs;
  for (std::size_t f = 0; f < config.categorical.size(); ++f) {
    cat_rngs.push_back(root.split("draw-categorical", f));
    suffix_rngs.push_back(root.split("draw-suffix", f));
  }
  for (std::size_t f = 0; f < config.numeric.size(); ++f) num_rngs.push_back(root.split("draw-numeric", f));
  Rng hidden_rng = root.split("hidden");

  const auto n = static_cast<std::size_t>(config.n_instances);
  out.instances.reserve(n);
  if (config.hidden_context) out.hidden.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Concept& concept_i = concepts[static_cast<std::size_t>(out.concept_ids[i])];
    const int y = static_cast<int>(label_rng.below(static_cast<std::uint64_t>(config.n_classes)));
    LabeledInstance li;
    li.instance.index = static_cast<std::int64_t>(i);
    li.instance.values.reserve(out.schema.features.size());
    li.label = ClassLabel{y};
    for (std::size_t f = 0; f < config.categorical.size(); ++f) {
      const int k = sample_category(concept_i.category_probs[f][static_cast<std::size_t>(y)], cat_rngs[f]);
      std::string token = category_code(k);
      for (int d = 0; d < config.categorical[f].code_suffix_digits; ++d)
        token.push_back(static_cast<char>('0' + suffix_rngs[f].below(10)));
      li.instance.values.emplace_back(std::move(token));
    }
    for (std::size_t f = 0; f < config.numeric.size(); ++f) {
      const double z = concept_i.numeric_means[f][static_cast<std::size_t>(y)] + num_rngs[f].normal();
      const auto& spec = config.numeric[f];
      li.instance.values.emplace_back(spec.log_normal ? std::exp(spec.log_scale + z) : z);
    }
    if (config.hidden_context) {
      const double base = out.concept_ids[i] == 0 ? kHiddenLow : kHiddenHigh;
      out.hidden.push_back(std::clamp(base + kHiddenNoise * hidden_rng.normal(), 0.0, 1.0));
    }
    out.instances.push_back(std::move(li));
  }
  return out;
}

void write_csv(const SynthStream& stream, const std::filesystem::path& path) {
  std::vector<ExtraColumn> extra;
  if (!stream.hidden.empty()) extra.push_back({stream.hidden_name, stream.hidden});
  write_csv(path, stream.schema, stream.instances, extra);
}

void write_concepts_csv(const SynthStream& stream, const std::filesystem::path& path) {
  CsvFile file(path);
  file.stream() << "index,concept_id\n";
  for (std::size_t i = 0; i < stream.concept_ids.size(); ++i)
    file.stream() << stream.instances[i].instance.index << ',' << stream.concept_ids[i] << '\n';
  file.close();
}

}  // namespace driftstream
