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
#include <fstream>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace driftstream {

// RFC-4180 row reader: comma separated, '"' quoting with doubled quotes as
// escape, CRLF or LF line endings, quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::unique_ptr<std::istream> in);

  // Reads the next row into `fields`. Returns false at end of input.
  bool next_row(std::vector<std::string>& fields);

  // 1-based physical line number where the last returned row started.
  std::int64_t line() const { return row_start_line_; }

 private:
  std::unique_ptr<std::istream> in_;
  std::int64_t line_ = 1;
  std::int64_t row_start_line_ = 0;
};

std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

// Quotes a field when it contains a separator, quote or line break.
void write_csv_field(std::ostream& out, std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Fixed 6-decimal, locale-independent formatting used by every report CSV.
std::string format_fixed6(double value);

// Shortest representation that parses back to the same double.
std::string format_roundtrip(double value);

// Strict, locale-independent parse of a whole token. Returns false on junk.
bool parse_double(std::string_view token, double& out);
bool parse_int(std::string_view token, std::int64_t& out);

// Output file that reports failures with its path.
class CsvFile {
 public:
  explicit CsvFile(const std::filesystem::path& path);
  std::ostream& stream() { return out_; }
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace driftstream
