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

#include <sstream>

#include "oracles.hpp"
#include "strataflow/records.hpp"

using namespace strataflow;
using namespace strataflow::records;

namespace {

OutputRecord rec(std::string approach, double estimate, double exact, double bound, double loss) {
  OutputRecord r;
  r.scenario = "gaussian";
  r.fraction = 0.1;
  r.seed = 1;
  r.approach = std::move(approach);
  r.estimate = estimate;
  r.exact = exact;
  r.error_bound = bound;
  r.accuracy_loss = loss;
  r.forwarded_fraction = 0.1;
  return r;
}

}  // namespace

TEST_CASE("JSON lines keep the field order") {
  OutputRecord r = rec("whs", 12.5, 10, 3, 0.25);
  r.window = 4;
  r.sim_latency = 70;
  const auto line = to_jsonl(r);
  CHECK(line ==
        R"({"scenario":"gaussian","fraction":0.1,"seed":1,"window":4,"approach":"whs","estimate":12.5,)"
        R"("error_bound":3.0,"exact":10.0,"accuracy_loss":0.25,"forwarded_fraction":0.1,"sim_latency":70.0})");
  CHECK(parse_record(line) == r);
}

TEST_CASE("null estimates survive a round trip") {
  OutputRecord r = rec("whs", 0, 0, 0, 0);
  r.estimate.reset();
  r.exact.reset();
  const auto line = to_jsonl(r);
  CHECK(line.find("\"estimate\":null") != std::string::npos);
  CHECK(parse_record(line) == r);
}

TEST_CASE("malformed lines") {
  CHECK_RAISES(ErrorCode::MalformedRow, parse_record("{}"));
  CHECK_RAISES(ErrorCode::MalformedRow, parse_record("garbage"));
  CHECK_RAISES(ErrorCode::MalformedRow, parse_record(R"({"scenario": 3})"));
}

TEST_CASE("reading skips blank lines") {
  std::stringstream in;
  in << to_jsonl(rec("whs", 1, 1, 0, 0)) << "\n\n  \n" << to_jsonl(rec("srs", 2, 1, 0, 1)) << "\n";
  const auto rs = read_records(in);
  REQUIRE(rs.size() == 2);
  CHECK(rs[1].approach == "srs");
}

TEST_CASE("median") {
  CHECK(median({}) == 0.0);
  CHECK(median({3}) == 3.0);
  CHECK(median({5, 1, 3}) == 3.0);
  CHECK(median({4, 1, 3, 2}) == 2.5);
}

TEST_CASE("summaries group and sort") {
  std::vector<OutputRecord> rs{
      rec("whs", 11, 10, 2, 0.1), rec("whs", 13, 10, 2, 0.3), rec("whs", 10.5, 10, 2, 0.05),
      rec("srs", 20, 10, 1, 1.0), rec("exact", 10, 10, 0, 0.0),
  };
  auto other = rec("whs", 1, 1, 0, 0);
  other.fraction = 0.05;
  rs.push_back(other);

  const auto rows = summarize(rs);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].fraction == 0.05);
  CHECK(rows[1].approach == "exact");
  CHECK(rows[2].approach == "srs");
  const auto& whs = rows[3];
  CHECK(whs.windows == 3);
  CHECK(whs.median_loss == doctest::Approx(0.1));
  CHECK(whs.mean_loss == doctest::Approx(0.15));
  CHECK(whs.coverage == doctest::Approx(2.0 / 3.0));
  CHECK(whs.mean_forwarded == doctest::Approx(0.1));
  CHECK(rows[2].coverage == 0.0);

  const auto table = format_table(rows);
  CHECK(table.find("median_loss") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 5);
}

TEST_CASE("empty input gives a header-only table") {
  const auto table = format_table(summarize({}));
  CHECK(std::count(table.begin(), table.end(), '\n') == 1);
}

TEST_CASE("records from a run") {
  sim::SimOptions opt;
  opt.fraction = 0.2;
  const auto run = sim::Simulation(sim::scenario_preset("poisson"), opt).run(2);
  const auto rs = from_run("poisson", 0.2, 1, run, QueryKind::Sum);
  REQUIRE(rs.size() == 6);
  CHECK(rs[0].approach == "whs");
  CHECK(rs[1].approach == "srs");
  CHECK(rs[2].approach == "exact");
  CHECK(rs[2].accuracy_loss == 0.0);
  CHECK(rs[3].window == 1);
  CHECK(rs[0].accuracy_loss == run.metrics.accuracy_loss[0]);
}
