// Copyright 2026 The StrataFlow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "oracles.hpp"
#include "strataflow/ingest.hpp"

using namespace strataflow;
using namespace strataflow::ingest;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& text) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("strataflow_ingest_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
    std::ofstream(path) << text;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

ReplaySpec spec_for(const TempFile& f) {
  ReplaySpec s;
  s.path = f.path.string();
  s.key_column = "sensor";
  s.value_column = "reading";
  return s;
}

}  // namespace

TEST_CASE("three rows land in interval zero") {
  const TempFile f("sensor,reading\na,1.5\nb,2\na,3\n");
  auto s = spec_for(f);
  s.key_map = {{"a", 1}, {"b", 2}};
  const auto r = replay(s, kNanosPerSecond);
  CHECK(r.rows == 3);
  CHECK(r.malformed == 0);
  REQUIRE(r.items.size() == 3);
  for (const auto& ti : r.items) CHECK(ti.item.source_interval == 0);
  CHECK(r.items[0].item == item(1, 1.5, 0, 0));
  CHECK(r.items[1].item == item(2, 2.0, 0, 0));
  CHECK(r.items[2].item == item(1, 3.0, 1, 0));
  CHECK(r.strata.at("a") == SubStreamId{1});
}

TEST_CASE("unmapped keys hash with FNV-1a") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  const TempFile f("sensor,reading\nxyz,1\n");
  const auto r = replay(spec_for(f), kNanosPerSecond);
  CHECK(r.items.at(0).item.substream == SubStreamId{fnv1a64("xyz")});
}

TEST_CASE("per-key sums match a direct column sum") {
  std::string text = "sensor,reading\n";
  std::map<std::string, double> expected;
  for (int i = 0; i < 500; ++i) {
    const std::string key = "k" + std::to_string(i % 7);
    const double v = i * 0.25 - 30;
    expected[key] += v;
    text += key + "," + std::to_string(v) + "\n";
  }
  const TempFile f(text);
  const auto r = replay(spec_for(f), kNanosPerSecond);
  std::map<std::string, double> got;
  for (const auto& [key, id] : r.strata)
    for (const auto& ti : r.items)
      if (ti.item.substream == id) got[key] += ti.item.value;
  REQUIRE(got.size() == expected.size());
  for (const auto& [k, v] : expected) CHECK(got[k] == doctest::Approx(v));
}

TEST_CASE("malformed rows") {
  const TempFile f("sensor,reading\na,1\nb,oops\nc\nd,4\n");
  auto s = spec_for(f);
  const auto lenient = replay(s, kNanosPerSecond);
  CHECK(lenient.rows == 4);
  CHECK(lenient.malformed == 2);
  CHECK(lenient.items.size() == 2);
  s.strict = true;
  CHECK_RAISES(ErrorCode::MalformedRow, replay(s, kNanosPerSecond));
}

TEST_CASE("missing columns and files") {
  const TempFile f("sensor,reading\na,1\n");
  auto s = spec_for(f);
  s.value_column = "temperature";
  CHECK_RAISES(ErrorCode::MissingColumn, replay(s, kNanosPerSecond));
  s.value_column = "7";
  CHECK_RAISES(ErrorCode::MissingColumn, replay(s, kNanosPerSecond));
  s.value_column = "1";
  CHECK(replay(s, kNanosPerSecond).items.size() == 1);
  s.path = "/nonexistent/strataflow.csv";
  CHECK_RAISES(ErrorCode::Io, replay(s, kNanosPerSecond));
}

TEST_CASE("headerless files use column indices") {
  const TempFile f("a;10\nb;20\n");
  ReplaySpec s;
  s.path = f.path.string();
  s.key_column = "0";
  s.value_column = "1";
  s.delimiter = ';';
  s.has_header = false;
  const auto r = replay(s, kNanosPerSecond);
  REQUIRE(r.items.size() == 2);
  CHECK(r.items[1].item.value == 20.0);
}

TEST_CASE("time column and replay speed") {
  const TempFile f("t,sensor,reading\n100.0,a,1\n100.5,a,2\n102.25,a,3\n");
  auto s = spec_for(f);
  s.time_column = "t";
  const auto r = replay(s, kNanosPerSecond);
  REQUIRE(r.items.size() == 3);
  CHECK(r.items[0].time == 0);
  CHECK(r.items[1].time == kNanosPerSecond / 2);
  CHECK(r.items[2].item.source_interval == 2);

  s.speed = 4.0;
  const auto fast = replay(s, kNanosPerSecond);
  CHECK(fast.items[2].time == 562'500'000);
  CHECK(fast.items[2].item.source_interval == 0);
  s.speed = 0;
  CHECK_RAISES(ErrorCode::InvalidConfig, replay(s, kNanosPerSecond));
}

TEST_CASE("rows spread evenly without a time column") {
  std::string text = "sensor,reading\n";
  for (int i = 0; i < 40; ++i) text += "a," + std::to_string(i) + "\n";
  const TempFile f(text);
  auto s = spec_for(f);
  s.spread_intervals = 4;
  const auto r = replay(s, kNanosPerSecond);
  std::map<std::uint64_t, int> per;
  for (const auto& ti : r.items) ++per[ti.item.source_interval];
  CHECK(per == std::map<std::uint64_t, int>{{0, 10}, {1, 10}, {2, 10}, {3, 10}});
}

TEST_CASE("keys beyond max_strata share the overflow stratum") {
  const TempFile f("sensor,reading\na,1\nb,2\nc,3\nd,4\na,5\n");
  auto s = spec_for(f);
  s.max_strata = 2;
  s.overflow_substream = 99;
  const auto r = replay(s, kNanosPerSecond);
  CHECK(r.strata.at("c") == SubStreamId{99});
  CHECK(r.strata.at("d") == SubStreamId{99});
  CHECK(r.strata.at("a") != SubStreamId{99});
  s.overflow_substream = 0;
  CHECK(replay(s, kNanosPerSecond).strata.at("d") == SubStreamId{fnv1a64("__other__")});
}

TEST_CASE("quoted fields") {
  CHECK(split_delimited("a,b,c", ',') == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_delimited("\"x,y\",2", ',') == std::vector<std::string>{"x,y", "2"});
  CHECK(split_delimited("\"say \"\"hi\"\"\",3", ',') == std::vector<std::string>{"say \"hi\"", "3"});
  CHECK(split_delimited("a,,b\r", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(split_delimited("", ',') == std::vector<std::string>{""});
}
