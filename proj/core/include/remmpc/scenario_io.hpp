#pragma once

#include <optional>
#include <string>

#include "remmpc/controller.hpp"

namespace remmpc {
namespace io {

/// Scenario plus the optional controller kind named in the file's run section.
struct ScenarioDocument {
  Scenario scenario;
  std::optional<controller::ControllerKind> controller;
};

/// Parses a scenario document (JSON with sections system/cost/constraints/run).
/// Missing cost.P_terminal defaults to Q; constraints are optional.
/// Throws ParseError with a field path on malformed input.
ScenarioDocument parse_scenario_string(const std::string& text);

/// Reads and parses a scenario file.
ScenarioDocument load_scenario(const std::string& path);

/// Serializes a scenario back to the same document format; parsing the result
/// yields an equal scenario.
std::string serialize_scenario(const Scenario& scenario,
                               std::optional<controller::ControllerKind> kind = std::nullopt);

/// Controller kind named on the command line / in scenario files:
/// "re-mpc" (penalized), "re-mpc-exact", "c-mpc".
controller::ControllerKind parse_controller_kind(const std::string& name);
std::string controller_kind_name(controller::ControllerKind kind);

}  // namespace io
}  // namespace remmpc
