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

#include "driftstream/stream.hpp"

#include <algorithm>
#include <set>

#include "driftstream/error.hpp"

namespace driftstream {

void FeatureSchema::validate() const {
  std::set<std::string_view> seen;
  for (const auto& f : features) {
    if (f.name.empty()) throw ConfigError("feature name must be non-empty");
    if (!seen.insert(f.name).second) throw ConfigError("duplicate feature name: " + f.name);
  }
  if (!label_column.empty() && seen.count(label_column))
    throw ConfigError("label column '" + label_column + "' is also a predictive feature");
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
}

std::optional<std::size_t> FeatureSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i].name == name) return i;
  return std::nullopt;
}

std::size_t FeatureSchema::count(FeatureKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      features.begin(), features.end(), [kind](const FeatureSpec& f) { return f.kind == kind; }));
}

LabelDecoder class_id_decoder(int num_classes) {
  return [num_classes](std::string_view token, std::int64_t row) {
    std::int64_t id = 0;
    if (!parse_int(token, id)) throw ParseError("label '" + std::string(token) + "' is not an integer class id", row);
    if (id < 0 || id >= num_classes)
      throw ParseError("label " + std::to_string(id) + " outside [0, " + std::to_string(num_classes) + ")", row);
    return ClassLabel{static_cast<int>(id)};
  };
}

CsvStream CsvStream::open(const std::filesystem::path& path, FeatureSchema schema,
                          LabelDecoder decoder) {
  return CsvStream(std::make_unique<CsvReader>(open_input(path)), std::move(schema),
                   std::move(decoder));
}

CsvStream CsvStream::from_istream(std::unique_ptr<std::istream> in, FeatureSchema schema,
                                  LabelDecoder decoder) {
  return CsvStream(std::make_unique<CsvReader>(std::move(in)), std::move(schema),
                   std::move(decoder));
}

CsvStream::CsvStream(std::unique_ptr<CsvReader> reader, FeatureSchema schema, LabelDecoder decoder)
    : reader_(std::move(reader)), schema_(std::move(schema)), decoder_(std::move(decoder)) {
  schema_.validate();
  if (!decoder_) decoder_ = class_id_decoder(schema_.num_classes);
  next_index_ = schema_.index_origin;
  if (!reader_->next_row(header_)) {
    header_.clear();
    return;  // empty file: empty stream
  }
  auto column_of = [this](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header_.begin());
  };
  for (const auto& f : schema_.features) {
    auto col = column_of(f.name);
    if (!col) throw SchemaError("missing column '" + f.name + "'");
    feature_columns_.push_back(*col);
  }
  if (!schema_.label_column.empty()) {
    label_column_ = column_of(schema_.label_column);
    if (!label_column_) throw SchemaError("missing column '" + schema_.label_column + "'");
  }
}

std::optional<Record> CsvStream::next() {
  if (header_.empty()) return std::nullopt;
  if (!reader_->next_row(row_)) return std::nullopt;
  const std::int64_t line = reader_->line();
  // A lone empty line at the end of a file is not a record.
  if (row_.size() == 1 && row_[0].empty() && header_.size() > 1) return next();
  if (row_.size() != header_.size())
    throw ParseError("expected " + std::to_string(header_.size()) + " fields, got " +
                         std::to_string(row_.size()),
                     line);

  Record rec;
  rec.instance.index = next_index_++;
  rec.instance.values.reserve(schema_.features.size());
  for (std::size_t i = 0; i < schema_.features.size(); ++i) {
    const auto& spec = schema_.features[i];
    std::string& cell = row_[feature_columns_[i]];
    if (spec.kind == FeatureKind::categorical) {
      rec.instance.values.emplace_back(cell.empty() ? std::string(kMissingCategory) : std::move(cell));
    } else {
      double v = 0.0;
      if (cell.empty()) throw ParseError("missing numeric value in column '" + spec.name + "'", line);
      if (!parse_double(cell, v))
        throw ParseError("non-numeric value '" + cell + "' in column '" + spec.name + "'", line);
      rec.instance.values.emplace_back(v);
    }
  }
  if (label_column_ && !row_[*label_column_].empty())
    rec.label = decoder_(row_[*label_column_], line);
  return rec;
}

std::vector<Record> take(CsvStream& stream, std::size_t n) {
  std::vector<Record> out;
  while (out.size() < n) {
    auto rec = stream.next();
    if (!rec) break;
    out.push_back(std::move(*rec));
  }
  return out;
}

std::vector<Record> read_all(CsvStream& stream) {
  std::vector<Record> out;
  while (auto rec = stream.next()) out.push_back(std::move(*rec));
  return out;
}

std::vector<std::string> read_header(const std::filesystem::path& path) {
  CsvReader reader(open_input(path));
  std::vector<std::string> header;
  if (!reader.next_row(header)) header.clear();
  return header;
}

std::vector<LabeledInstance> labeled_only(std::vector<Record> records) {
  std::vector<LabeledInstance> out;
  out.reserve(records.size());
  for (auto& r : records)
    if (r.label) out.push_back({std::move(r.instance), *r.label});
  return out;
}

void write_csv(const std::filesystem::path& path, const FeatureSchema& schema,
               const std::vector<LabeledInstance>& instances,
               const std::vector<ExtraColumn>& extra) {
  for (const auto& col : extra)
    if (col.values.size() != instances.size())
      throw ConfigError("extra column '" + col.name + "' length does not match the stream");
  CsvFile file(path);
  auto& out = file.stream();
  std::vector<std::string> fields;
  for (const auto& f : schema.features) fields.push_back(f.name);
  for (const auto& col : extra) fields.push_back(col.name);
  fields.push_back(schema.label_column);
  write_csv_row(out, fields);

  for (std::size_t r = 0; r < instances.size(); ++r) {
    fields.clear();
    for (const auto& v : instances[r].instance.values) {
      if (const auto* s = std::get_if<std::string>(&v))
        fields.push_back(*s == kMissingCategory ? std::string() : *s);
      else
        fields.push_back(format_roundtrip(std::get<double>(v)));
    }
    for (const auto& col : extra) fields.push_back(format_roundtrip(col.values[r]));
    fields.push_back(std::to_string(instances[r].label.id));
    write_csv_row(out, fields);
  }
  file.close();
}

}  // namespace driftstream
