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

#include <doctest.h>

#include <sstream>

#include "driftstream/csv.hpp"
#include "driftstream/error.hpp"
#include "driftstream/stream.hpp"
#include "test_util.hpp"

using namespace driftstream;

namespace {

FeatureSchema small_schema() {
  FeatureSchema s;
  s.features = {{"supplier", FeatureKind::categorical}, {"value", FeatureKind::numeric}};
  s.label_column = "label";
  s.num_classes = 3;
  return s;
}

CsvStream stream_of(const std::string& text, FeatureSchema schema = small_schema()) {
  return CsvStream::from_istream(std::make_unique<std::istringstream>(text), std::move(schema));
}

std::vector<std::string> rows_of(const std::string& text) {
  CsvReader r(std::make_unique<std::istringstream>(text));
  std::vector<std::string> row, flat;
  while (r.next_row(row)) {
    std::string joined;
    for (std::size_t i = 0; i < row.size(); ++i) joined += (i ? "|" : "") + row[i];
    flat.push_back(joined);
  }
  return flat;
}

}  // namespace

TEST_SUITE("stream_core") {
  TEST_CASE("csv reader handles quoting and line endings") {
    CHECK(rows_of("a,b\r\n1,2\r\n") == std::vector<std::string>{"a|b", "1|2"});
    CHECK(rows_of("a,\"b,c\"\n") == std::vector<std::string>{"a|b,c"});
    CHECK(rows_of("\"say \"\"hi\"\"\",x\n") == std::vector<std::string>{"say \"hi\"|x"});
    CHECK(rows_of("\"two\nlines\",x\n") == std::vector<std::string>{"two\nlines|x"});
    CHECK(rows_of("a,b") == std::vector<std::string>{"a|b"});
    CHECK(rows_of(",\n") == std::vector<std::string>{"|"});
    CHECK(rows_of("").empty());
    CHECK_THROWS_AS(rows_of("\"open,x\n"), ParseError);
  }

  TEST_CASE("csv reader reports the starting line of each row") {
    CsvReader r(std::make_unique<std::istringstream>("h\n\"a\nb\"\nc\n"));
    std::vector<std::string> row;
    REQUIRE(r.next_row(row));
    CHECK(r.line() == 1);
    REQUIRE(r.next_row(row));
    CHECK(r.line() == 2);
    REQUIRE(r.next_row(row));
    CHECK(r.line() == 4);
  }

  TEST_CASE("field writer quotes only when needed") {
    std::ostringstream out;
    write_csv_row(out, {"plain", "a,b", "q\"q", "line\nbreak"});
    CHECK(out.str() == "plain,\"a,b\",\"q\"\"q\",\"line\nbreak\"\n");
  }

  TEST_CASE("number formatting and parsing") {
    CHECK(format_fixed6(2.0 / 3.0) == "0.666667");
    CHECK(format_fixed6(-0.0000001) == "0.000000");
    CHECK(format_fixed6(1234.5) == "1234.500000");
    for (double v : {0.1, 1.0 / 3.0, 5502.26824575671, -1e-300, 1e300}) {
      double back = 0.0;
      REQUIRE(parse_double(format_roundtrip(v), back));
      CHECK(back == v);
    }
    double d = 0.0;
    CHECK_FALSE(parse_double("abc", d));
    CHECK_FALSE(parse_double("1.5x", d));
    CHECK_FALSE(parse_double("", d));
    CHECK_FALSE(parse_double("nan", d));
    CHECK_FALSE(parse_double("inf", d));
    CHECK(parse_double(" 2.5 ", d));
    CHECK(d == 2.5);
    std::int64_t i = 0;
    CHECK(parse_int("-12", i));
    CHECK(i == -12);
    CHECK_FALSE(parse_int("1.0", i));
  }

  TEST_CASE("three labelled rows yield indices 0, 1, 2") {
    auto s = stream_of("supplier,value,label\nA,1.5,0\nB,2,1\nA,3,2\n");
    const auto all = labeled_only(read_all(s));
    REQUIRE(all.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(all[i].instance.index == static_cast<std::int64_t>(i));
    CHECK(std::get<std::string>(all[1].instance.values[0]) == "B");
    CHECK(std::get<double>(all[1].instance.values[1]) == 2.0);
    CHECK(all[2].label.id == 2);
  }

  TEST_CASE("non-numeric cell cites its row") {
    std::string text = "supplier,value,label\n";
    for (int i = 0; i < 5; ++i) text += "A,1,0\n";
    text += "A,abc,0\n";  // seventh line of the file
    auto s = stream_of(text);
    try {
      read_all(s);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.row() == 7);
      CHECK(std::string(e.what()).find("row 7") != std::string::npos);
      CHECK(std::string(e.what()).find("abc") != std::string::npos);
    }
  }

  TEST_CASE("schema problems") {
    CHECK_THROWS_WITH_AS(stream_of("supplier,label\nA,0\n"), doctest::Contains("missing column 'value'"), SchemaError);
    CHECK_THROWS_WITH_AS(stream_of("supplier,value\nA,1\n"), doctest::Contains("missing column 'label'"),
                         SchemaError);
    auto dup = small_schema();
    dup.features.push_back({"value", FeatureKind::numeric});
    CHECK_THROWS_AS(dup.validate(), ConfigError);
    auto clash = small_schema();
    clash.label_column = "value";
    CHECK_THROWS_AS(clash.validate(), ConfigError);
    auto one = small_schema();
    one.num_classes = 1;
    CHECK_THROWS_AS(one.validate(), ConfigError);
  }

  TEST_CASE("extra columns are ignored and order follows the schema") {
    auto s = stream_of("label,noise,value,supplier\n1,zz,4.5,X\n");
    auto rec = s.next();
    REQUIRE(rec);
    CHECK(std::get<std::string>(rec->instance.values[0]) == "X");
    CHECK(std::get<double>(rec->instance.values[1]) == 4.5);
    CHECK(rec->label->id == 1);
    CHECK_FALSE(s.next());
  }

  TEST_CASE("missing cells") {
    auto s = stream_of("supplier,value,label\n,2,\n");
    auto rec = s.next();
    REQUIRE(rec);
    CHECK(std::get<std::string>(rec->instance.values[0]) == kMissingCategory);
    CHECK_FALSE(rec->label.has_value());
    auto bad = stream_of("supplier,value,label\nA,,0\n");
    CHECK_THROWS_AS(bad.next(), ParseError);
  }

  TEST_CASE("label outside the class range") {
    auto s = stream_of("supplier,value,label\nA,1,3\n");
    CHECK_THROWS_AS(s.next(), ParseError);
    auto t = stream_of("supplier,value,label\nA,1,x\n");
    CHECK_THROWS_AS(t.next(), ParseError);
  }

  TEST_CASE("take") {
    auto s = stream_of("supplier,value,label\nA,1,0\nB,2,1\nC,3,2\nD,4,0\n");
    CHECK(take(s, 0).empty());
    CHECK(take(s, 10).size() == 4);
    CHECK(take(s, 1).empty());
  }

  TEST_CASE("take advances the stream") {
    auto s = stream_of("supplier,value,label\nA,1,0\nB,2,1\nC,3,2\n");
    const auto first = take(s, 2);
    REQUIRE(first.size() == 2);
    const auto rest = read_all(s);
    REQUIRE(rest.size() == 1);
    CHECK(rest[0].instance.index == 2);
  }

  TEST_CASE("empty input and header-only input are empty streams") {
    auto a = stream_of("");
    CHECK_FALSE(a.next());
    auto b = stream_of("supplier,value,label\n");
    CHECK_FALSE(b.next());
  }

  TEST_CASE("index origin shifts indices") {
    auto schema = small_schema();
    schema.index_origin = 100;
    auto s = stream_of("supplier,value,label\nA,1,0\nB,2,1\n", schema);
    const auto all = read_all(s);
    CHECK(all[0].instance.index == 100);
    CHECK(all[1].instance.index == 101);
  }

  TEST_CASE("write then read is the identity") {
    testutil::TempDir dir("stream");
    std::vector<LabeledInstance> items;
    for (int i = 0; i < 50; ++i)
      items.push_back({{i, {std::string(i % 3 ? "x,y" : "plain"), 0.1 * i - 2.0}}, {i % 3}});
    write_csv(dir / "s.csv", small_schema(), items, {{"extra", std::vector<double>(50, 0.5)}});
    CHECK(read_header(dir / "s.csv") == std::vector<std::string>{"supplier", "value", "extra", "label"});
    auto s = CsvStream::open(dir / "s.csv", small_schema());
    CHECK(labeled_only(read_all(s)) == items);
  }

  TEST_CASE("open reports missing files") {
    CHECK_THROWS_AS(CsvStream::open("/nonexistent/driftstream.csv", small_schema()), IoError);
  }
}
