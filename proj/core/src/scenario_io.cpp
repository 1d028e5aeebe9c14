#include "remmpc/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace remmpc {
namespace io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ParseError("scenario: field '" + field + "': " + why);
}

Mat parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(field, "expected a nested array of numbers");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  Mat M(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<Index>(j[i].size()) != cols) {
      fail(field, "ragged rows");
    }
    for (Index c = 0; c < cols; ++c) {
      if (!j[i][c].is_number()) fail(field, "non-numeric entry");
      M(i, c) = j[i][c].get<double>();
    }
  }
  return M;
}

Vec parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) fail(field, "non-numeric entry");
    v(i) = j[i].get<double>();
  }
  return v;
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where + "." + key, "missing");
  return *it;
}

json matrix_to_json(const Mat& M) {
  json rows = json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vec& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

ScenarioDocument parse_scenario_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

  ScenarioDocument out;
  Scenario& s = out.scenario;

  const json& system = require(doc, "system", "");
  s.system.A = parse_matrix(require(system, "A", "system"), "system.A");
  s.system.B = parse_matrix(require(system, "B", "system"), "system.B");

  const json& cost = require(doc, "cost", "");
  s.cost.Q = parse_matrix(require(cost, "Q", "cost"), "cost.Q");
  s.cost.R = parse_matrix(require(cost, "R", "cost"), "cost.R");
  s.cost.P_terminal = cost.contains("P_terminal")
                          ? parse_matrix(cost["P_terminal"], "cost.P_terminal")
                          : s.cost.Q;

  if (doc.contains("constraints") && !doc["constraints"].is_null()) {
    const json& c = doc["constraints"];
    const Vec xl = parse_vector(require(c, "x_lower", "constraints"), "constraints.x_lower");
    const Vec xu = parse_vector(require(c, "x_upper", "constraints"), "constraints.x_upper");
    const Vec ul = parse_vector(require(c, "u_lower", "constraints"), "constraints.u_lower");
    const Vec uu = parse_vector(require(c, "u_upper", "constraints"), "constraints.u_upper");
    try {
      s.constraints = BoxConstraints::from_bounds(xl, xu, ul, uu);
    } catch (const EmptyBoxError& e) {
      throw ParseError(std::string("scenario: constraints: ") + e.what());
    }
  }

  const json& run = require(doc, "run", "");
  s.x0 = parse_vector(require(run, "x0", "run"), "run.x0");
  const json& tf = require(run, "t_f", "run");
  if (!tf.is_number_integer()) fail("run.t_f", "expected an integer");
  s.t_f = tf.get<int>();
  const json& l = require(run, "l", "run");
  if (!l.is_number_integer()) fail("run.l", "expected an integer");
  s.l = l.get<int>();
  if (run.contains("mu")) {
    if (!run["mu"].is_number()) fail("run.mu", "expected a number");
    s.mu = run["mu"].get<double>();
  }
  if (run.contains("controller")) {
    if (!run["controller"].is_string()) fail("run.controller", "expected a string");
    try {
      out.controller = parse_controller_kind(run["controller"].get<std::string>());
    } catch (const Error& e) {
      throw ParseError(std::string("scenario: run.controller: ") + e.what());
    }
  }

  try {
    s.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("scenario: validation failed: ") + e.what());
  }
  return out;
}

ScenarioDocument load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("scenario: cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_string(buf.str());
}

std::string serialize_scenario(const Scenario& s,
                               std::optional<controller::ControllerKind> kind) {
  json doc;
  doc["system"]["A"] = matrix_to_json(s.system.A);
  doc["system"]["B"] = matrix_to_json(s.system.B);
  doc["cost"]["Q"] = matrix_to_json(s.cost.Q);
  doc["cost"]["R"] = matrix_to_json(s.cost.R);
  doc["cost"]["P_terminal"] = matrix_to_json(s.cost.P_terminal);
  if (s.constraints && s.constraints->x_lower) {
    doc["constraints"]["x_lower"] = vector_to_json(*s.constraints->x_lower);
    doc["constraints"]["x_upper"] = vector_to_json(*s.constraints->x_upper);
    doc["constraints"]["u_lower"] = vector_to_json(*s.constraints->u_lower);
    doc["constraints"]["u_upper"] = vector_to_json(*s.constraints->u_upper);
  }
  doc["run"]["x0"] = vector_to_json(s.x0);
  doc["run"]["t_f"] = s.t_f;
  doc["run"]["l"] = s.l;
  doc["run"]["mu"] = s.mu;
  if (kind) doc["run"]["controller"] = controller_kind_name(*kind);
  return doc.dump(2) + "\n";
}

controller::ControllerKind parse_controller_kind(const std::string& name) {
  if (name == "re-mpc") return controller::ControllerKind::ReMpcPenalized;
  if (name == "re-mpc-exact") return controller::ControllerKind::ReMpcExact;
  if (name == "c-mpc") return controller::ControllerKind::ClassicalMpc;
  throw ParseError("unknown controller kind '" + name +
                   "' (expected re-mpc, re-mpc-exact, or c-mpc)");
}

std::string controller_kind_name(controller::ControllerKind kind) {
  switch (kind) {
    case controller::ControllerKind::ReMpcPenalized:
      return "re-mpc";
    case controller::ControllerKind::ReMpcExact:
      return "re-mpc-exact";
    case controller::ControllerKind::ClassicalMpc:
      return "c-mpc";
  }
  return "unknown";
}

}  // namespace io
}  // namespace remmpc
