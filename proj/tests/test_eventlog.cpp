#include <doctest.h>

#include <sstream>

#include "rcnu/errors.hpp"
#include "rcnu/eventlog.hpp"
#include "rcnu/lognet.hpp"
#include "support.hpp"

using namespace rcnu;

TEST_CASE("a single case becomes a chain") {
  const auto log = testing::log_from_csv("c,a,1\nc,b,2\n");
  REQUIRE(log.size() == 2);
  CHECK(log.order().precedes(0, 1));
  CHECK(log.order().is_total());
}

TEST_CASE("multiplicity syntax") {
  const auto log = testing::log_from_csv("case,activity,timestamp,resources\nc,a,1,s:x*2;t:y\n");
  CHECK(log.event(0).resources.count(Name("x")) == 2);
  CHECK(log.event(0).resources.count(Name("y")) == 1);
  CHECK(log.roles().at(Name("x")) == "s");
}

TEST_CASE("ties: across cases incomparable, within a case by position") {
  const auto log = testing::log_from_csv("c1,b,5\nc2,a,5\nc1,a,5\n");
  CHECK(log.order().concurrent(0, 1));
  CHECK(log.order().precedes(0, 2));
  CHECK(log.trace(Name("c1")) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("iso timestamps") {
  CHECK(parse_timestamp("1970-01-01T00:00:10Z") == doctest::Approx(10));
  CHECK(parse_timestamp("2024-03-01 12:00:00") - parse_timestamp("2024-02-29T12:00:00") == doctest::Approx(86400));
  CHECK(parse_timestamp("2024-01-01T01:00:00+01:00") == doctest::Approx(parse_timestamp("2024-01-01T00:00:00Z")));
  CHECK(parse_timestamp("3.5") == doctest::Approx(3.5));
  CHECK_THROWS_AS(parse_timestamp("yesterday"), ParseError);
}

TEST_CASE("malformed rows report their line") {
  try {
    testing::log_from_csv("case,activity,timestamp\nc,a,1\nc,b\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(testing::log_from_csv("c,a,1,s:x*0\n"), ParseError);
  CHECK_THROWS_AS(testing::log_from_csv("c,a,1,x\n"), ParseError);
  CHECK_THROWS_AS(testing::log_from_csv("c,a,soon\n"), ParseError);
}

TEST_CASE("duplicates are kept with a warning") {
  const auto log = testing::log_from_csv("c,a,1\nc,a,1\n");
  CHECK(log.size() == 2);
  CHECK(log.warnings.size() == 1);
}

TEST_CASE("serialize then parse is the identity") {
  const auto log = testing::log_from_csv(
      "case,activity,timestamp,resources\n\"c,1\",\"say \"\"hi\"\"\",2024-01-01T00:00:00Z,r:x*2;q:y\nc2,b,7,\n");
  std::ostringstream out;
  serialize_log(log, out);
  const auto again = testing::log_from_csv(out.str());
  REQUIRE(again.size() == log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    CHECK(again.event(i).case_id == log.event(i).case_id);
    CHECK(again.event(i).activity == log.event(i).activity);
    CHECK(again.event(i).timestamp == log.event(i).timestamp);
    CHECK(again.event(i).resources == log.event(i).resources);
  }
  CHECK(again.order() == log.order());
  CHECK(again.roles() == log.roles());
  std::ostringstream out2;
  serialize_log(again, out2);
  CHECK(out2.str() == out.str());
}

TEST_CASE("hospital log projections") {
  const auto log = testing::fixture_log("hospital_log.csv");
  REQUIRE(log.size() == 10);
  std::size_t total = 0;
  for (Name c : log.cases()) {
    const auto p = project_case(log, c);
    CHECK(p.size() == 5);
    CHECK(p.order().is_total());
    total += p.size();
  }
  CHECK(total == log.size());
  CHECK(project_case(log, Name("nobody")).empty());
  // Chronology: an earlier event is never after a later one.
  for (const auto& [a, b] : log.order().pairs()) CHECK(log.event(a).timestamp <= log.event(b).timestamp);
}

TEST_CASE("log net executions are the linearizations of the log") {
  const auto log = testing::log_from_csv("c1,a,1,m:x\nc2,a,1,m:x*2\nc1,b,2\nc2,b,3\n");
  const auto ln = build_log_net(log);
  CHECK(ln.net.transitions().size() == 4);
  const auto p = ln.net.place_index("res_e1_x");
  CHECK(ln.net.initial().places[p].count({Name(), Name("x")}) == 2);
  std::set<LabelSequence> expected;
  for (const auto& lin : linearizations(log.order())) {
    LabelSequence w;
    for (auto e : lin) w.push_back(log.event(e).activity + "@" + log.event(e).case_id.str());
    expected.insert(w);
  }
  CHECK(colored_language(ln.net, {}, 8, true) == expected);
}

TEST_CASE("single event log net") {
  const auto ln = build_log_net(testing::log_from_csv("c,a,1\n"));
  CHECK(ln.net.places().size() == 2);
  CHECK(ln.net.place(0).name == "src_c");
  CHECK(ln.net.place(1).name == "snk_c");
}
