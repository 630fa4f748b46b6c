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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "driftstream/csv.hpp"

namespace driftstream {

enum class FeatureKind { categorical, numeric };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::categorical;
};

// Ordered predictive features plus the label column. Columns present in a
// file but absent from the schema are ignored by readers.
struct FeatureSchema {
  std::vector<FeatureSpec> features;
  std::string label_column = "label";
  std::int64_t index_origin = 0;
  int num_classes = 3;

  // Throws ConfigError when names are empty/duplicated, the label column is
  // also a feature, or num_classes < 2.
  void validate() const;
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t count(FeatureKind kind) const;
};

struct ClassLabel {
  int id = 0;
  friend constexpr auto operator<=>(const ClassLabel&, const ClassLabel&) = default;
};

// Categorical token or finite real, positionally matching the schema.
using FeatureValue = std::variant<std::string, double>;

struct Instance {
  std::int64_t index = 0;
  std::vector<FeatureValue> values;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct LabeledInstance {
  Instance instance;
  ClassLabel label;
  friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

// One stream element; `label` is empty for unlabeled rows.
struct Record {
  Instance instance;
  std::optional<ClassLabel> label;
  friend bool operator==(const Record&, const Record&) = default;
};

// Reserved token for an empty categorical cell.
inline constexpr std::string_view kMissingCategory = "__MISSING__";

// Maps a non-empty label cell to a class. `row` is the 1-based line number.
using LabelDecoder = std::function<ClassLabel(std::string_view token, std::int64_t row)>;

// Default decoder: integer class id in [0, num_classes).
LabelDecoder class_id_decoder(int num_classes);

// Single-pass, single-consumer reader yielding records in file order.
class CsvStream {
 public:
  static CsvStream open(const std::filesystem::path& path, FeatureSchema schema,
                        LabelDecoder decoder = {});
  static CsvStream from_istream(std::unique_ptr<std::istream> in, FeatureSchema schema,
                                LabelDecoder decoder = {});

  CsvStream(CsvStream&&) noexcept = default;
  CsvStream& operator=(CsvStream&&) noexcept = default;
  CsvStream(const CsvStream&) = delete;
  CsvStream& operator=(const CsvStream&) = delete;

  std::optional<Record> next();

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<std::string>& header() const { return header_; }

 private:
  CsvStream(std::unique_ptr<CsvReader> reader, FeatureSchema schema, LabelDecoder decoder);

  std::unique_ptr<CsvReader> reader_;
  FeatureSchema schema_;
  LabelDecoder decoder_;
  std::vector<std::string> header_;
  std::vector<std::size_t> feature_columns_;
  std::optional<std::size_t> label_column_;
  std::vector<std::string> row_;
  std::int64_t next_index_ = 0;
};

// Pulls min(n, remaining) records, advancing the stream past them.
std::vector<Record> take(CsvStream& stream, std::size_t n);

// Drains the stream.
std::vector<Record> read_all(CsvStream& stream);

// Header row of a CSV file (empty for an empty file).
std::vector<std::string> read_header(const std::filesystem::path& path);

// Drops unlabeled records, preserving order.
std::vector<LabeledInstance> labeled_only(std::vector<Record> records);

// Writes header (schema features, extra columns, label) then one row per
// instance. Numeric values use a round-trip exact representation.
struct ExtraColumn {
  std::string name;
  std::vector<double> values;
};
void write_csv(const std::filesystem::path& path, const FeatureSchema& schema,
               const std::vector<LabeledInstance>& instances,
               const std::vector<ExtraColumn>& extra = {});

}  // namespace driftstream
