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
#include <filesystem>
#include <string>
#include <vector>

#include "driftstream/stream.hpp"

namespace driftstream {

enum class DriftKind { none, sudden, gradual, recurring };

// One concept change. For `gradual`, `width` is the interpolation window; for
// `recurring`, it is the period with which old and new concept alternate.
struct DriftSpec {
  DriftKind kind = DriftKind::none;
  std::int64_t position = 0;
  std::int64_t width = 0;
  double magnitude = 1.0;
};

struct SynthCategorical {
  std::string name;
  int cardinality = 8;
  // Random trailing digits appended to the 4-digit category code; models
  // fine-grained codes whose leading digits carry the signal.
  int code_suffix_digits = 0;
};

struct SynthNumeric {
  std::string name;
  // exp(log_scale + class mean + noise) instead of class mean + noise.
  bool log_normal = false;
  double log_scale = 0.0;
};

struct SynthConfig {
  std::int64_t n_instances = 10000;
  int n_classes = 3;
  std::vector<SynthCategorical> categorical;
  std::vector<SynthNumeric> numeric;
  std::vector<DriftSpec> drift;
  // Emit an unobserved step feature that follows the active concept.
  bool hidden_context = false;
  std::string hidden_name = "automation";
  std::uint64_t seed = 0;
  // Log-weight scale of per-class category tables; larger is more peaked.
  double table_concentration = 1.0;
  // Standard deviation of per-class numeric means (within-class sd is 1).
  double numeric_separation = 1.0;

  // Throws ConfigError on invalid counts, drift positions or magnitudes.
  void validate() const;
};

// Generic config with features named cat0.., num0.. of the given counts.
SynthConfig make_synth_config(std::int64_t n_instances, int n_categorical, int n_numeric,
                              int n_classes, std::uint64_t seed);

// Procurement-flavoured benchmark: 70,774 instances, one sudden drift at
// 35,000 with magnitude 0.9 and a hidden automation-rate step.
SynthConfig paper_like_profile(std::uint64_t seed);

// Naive-Bayes generative model for one concept. Classes are equiprobable.
struct Concept {
  std::vector<std::vector<std::vector<double>>> category_probs;  // [feature][class][category]
  std::vector<std::vector<double>> numeric_means;                // [feature][class]
};

// Concept 0 followed by one concept per effective (non-`none`) drift, each
// blended from its predecessor with the drift's magnitude.
std::vector<Concept> build_concepts(const SynthConfig& config);

// Ground-truth concept id for every index, in stream order.
std::vector<int> concept_schedule(const SynthConfig& config);

struct SynthStream {
  FeatureSchema schema;  // predictive features only
  std::vector<LabeledInstance> instances;
  std::vector<int> concept_ids;
  std::vector<double> hidden;  // empty unless hidden_context
  std::string hidden_name;
};

SynthStream generate(const SynthConfig& config);

// Stream CSV including the hidden column; readable with `schema`.
void write_csv(const SynthStream& stream, const std::filesystem::path& path);
// Sidecar (index, concept_id) for test oracles.
void write_concepts_csv(const SynthStream& stream, const std::filesystem::path& path);

// Token written for category `k` before any suffix digits.
std::string category_code(int k);

}  // namespace driftstream
