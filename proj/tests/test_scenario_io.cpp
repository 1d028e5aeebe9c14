#include <doctest.h>

#include "remmpc/scenario_io.hpp"
#include "support/test_support.hpp"

using namespace remmpc;

namespace {

const char* kExample1Json = R"({
  "system": {
    "A": [[0.9, 0.2], [-0.4, 0.8]],
    "B": [[0.1], [0.05]]
  },
  "cost": {
    "Q": [[0.5, -0.5], [-0.5, 10.0]],
    "R": [[1.0]]
  },
  "constraints": {
    "x_lower": [-0.45, -0.45],
    "x_upper": [0.5, 0.5],
    "u_lower": [-0.25],
    "u_upper": [0.25]
  },
  "run": {
    "x0": [0.5, -0.1],
    "t_f": 50,
    "l": 2,
    "mu": 1000.0,
    "controller": "re-mpc"
  }
})";

}  // namespace

TEST_CASE("parse_scenario_string: benchmark document") {
  const io::ScenarioDocument doc = io::parse_scenario_string(kExample1Json);
  const Scenario& s = doc.scenario;
  CHECK((s.system.A - testing::example1_A()).norm() == doctest::Approx(0.0));
  CHECK((s.system.B - testing::example1_B()).norm() == doctest::Approx(0.0));
  CHECK((s.cost.Q - testing::example1_Q()).norm() == doctest::Approx(0.0));
  // Missing P_terminal defaults to Q.
  CHECK((s.cost.P_terminal - s.cost.Q).norm() == doctest::Approx(0.0));
  REQUIRE(s.constraints.has_value());
  CHECK(s.t_f == 50);
  CHECK(s.l == 2);
  CHECK(s.mu == doctest::Approx(1000.0));
  REQUIRE(doc.controller.has_value());
  CHECK(*doc.controller == controller::ControllerKind::ReMpcPenalized);
}

TEST_CASE("serialize then parse is the identity") {
  const Scenario s = testing::example1_scenario();
  const std::string text =
      io::serialize_scenario(s, controller::ControllerKind::ClassicalMpc);
  const io::ScenarioDocument doc = io::parse_scenario_string(text);
  const Scenario& r = doc.scenario;
  CHECK((r.system.A - s.system.A).norm() == doctest::Approx(0.0));
  CHECK((r.system.B - s.system.B).norm() == doctest::Approx(0.0));
  CHECK((r.cost.Q - s.cost.Q).norm() == doctest::Approx(0.0));
  CHECK((r.cost.R - s.cost.R).norm() == doctest::Approx(0.0));
  CHECK((r.cost.P_terminal - s.cost.P_terminal).norm() == doctest::Approx(0.0));
  CHECK((r.x0 - s.x0).norm() == doctest::Approx(0.0));
  CHECK(r.t_f == s.t_f);
  CHECK(r.l == s.l);
  CHECK(r.mu == doctest::Approx(s.mu));
  REQUIRE(r.constraints.has_value());
  CHECK((*r.constraints->x_upper - *s.constraints->x_upper).norm() ==
        doctest::Approx(0.0));
  CHECK(*doc.controller == controller::ControllerKind::ClassicalMpc);

  // Unconstrained scenarios round trip without a constraints section.
  const Scenario plain = testing::example1_scenario(false);
  const io::ScenarioDocument doc2 =
      io::parse_scenario_string(io::serialize_scenario(plain));
  CHECK_FALSE(doc2.scenario.constraints.has_value());
  CHECK_FALSE(doc2.controller.has_value());
}

TEST_CASE("parse errors carry field paths") {
  CHECK_THROWS_AS(io::parse_scenario_string("not json"), ParseError);
  CHECK_THROWS_AS(io::parse_scenario_string("[1, 2]"), ParseError);

  using doctest::Contains;
  CHECK_THROWS_WITH_AS(io::parse_scenario_string(R"({"cost": {}, "run": {}})"),
                       Contains("system"), ParseError);

  // Ragged matrix rows.
  CHECK_THROWS_WITH_AS(io::parse_scenario_string(R"({
    "system": {"A": [[1, 0], [0]], "B": [[1], [1]]},
    "cost": {"Q": [[1, 0], [0, 1]], "R": [[1]]},
    "run": {"x0": [0, 0], "t_f": 10, "l": 2}
  })"),
                       Contains("system.A"), ParseError);

  // Non-integer horizon.
  CHECK_THROWS_WITH_AS(io::parse_scenario_string(R"({
    "system": {"A": [[0.5, 0], [0, 0.5]], "B": [[1], [1]]},
    "cost": {"Q": [[1, 0], [0, 1]], "R": [[1]]},
    "run": {"x0": [0, 0], "t_f": 10, "l": 2.5}
  })"),
                       Contains("run.l"), ParseError);

  // Empty constraint box.
  CHECK_THROWS_AS(io::parse_scenario_string(R"({
    "system": {"A": [[0.5, 0], [0, 0.5]], "B": [[1], [1]]},
    "cost": {"Q": [[1, 0], [0, 1]], "R": [[1]]},
    "constraints": {"x_lower": [1, 1], "x_upper": [-1, -1],
                    "u_lower": [-1], "u_upper": [1]},
    "run": {"x0": [0, 0], "t_f": 10, "l": 2}
  })"),
                  ParseError);

  // Semantically invalid scenario (l > t_f) fails validation at parse time.
  CHECK_THROWS_AS(io::parse_scenario_string(R"({
    "system": {"A": [[0.5, 0], [0, 0.5]], "B": [[1], [1]]},
    "cost": {"Q": [[1, 0], [0, 1]], "R": [[1]]},
    "run": {"x0": [0, 0], "t_f": 2, "l": 5}
  })"),
                  ParseError);
}

TEST_CASE("load_scenario: missing file") {
  CHECK_THROWS_AS(io::load_scenario("/nonexistent/path.scenario"), ParseError);
}

TEST_CASE("controller kind names round trip") {
  for (auto kind : {controller::ControllerKind::ReMpcPenalized,
                    controller::ControllerKind::ReMpcExact,
                    controller::ControllerKind::ClassicalMpc}) {
    CHECK(io::parse_controller_kind(io::controller_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(io::parse_controller_kind("mpc"), ParseError);
}
