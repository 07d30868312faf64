#include "capmic/search_io.hpp"

#include <fstream>
#include <set>

#include "capmic/design_io.hpp"
#include "capmic/errors.hpp"

namespace capmic {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ValidationError(path + ": " + why);
}

json parse_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string("cannot open ") + what + ": " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

AxisSpec axis_from_json(const json& axes, const std::string& name) {
  if (!axes.contains(name)) fail("axes." + name, "missing");
  const json& j = axes.at(name);
  if (!j.is_object()) fail("axes." + name, "must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "lower" && key != "upper" && key != "count") {
      fail("axes." + name + "." + key, "unknown key");
    }
  }
  AxisSpec axis;
  if (!j.contains("lower") || !j.at("lower").is_number()) fail("axes." + name, "lower missing or not a number");
  if (!j.contains("upper") || !j.at("upper").is_number()) fail("axes." + name, "upper missing or not a number");
  if (!j.contains("count") || !j.at("count").is_number_integer()) fail("axes." + name, "count missing or not an integer");
  axis.lower = j.at("lower").get<double>();
  axis.upper = j.at("upper").get<double>();
  axis.count = j.at("count").get<int>();
  return axis;
}

}  // namespace

DesignSpace space_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("space file: top level must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "base" && key != "axes") fail(key, "unknown key");
  }
  if (!j.contains("base")) fail("base", "missing");
  if (!j.contains("axes") || !j.at("axes").is_object()) fail("axes", "missing or not an object");

  DesignSpace space;
  space.base = design_from_json(j.at("base"));
  const json& axes = j.at("axes");
  for (const auto& [key, _] : axes.items()) {
    static const std::set<std::string> known{"diameter", "thickness", "stress",
                                             "gap",      "hole_fraction", "hole_side"};
    if (!known.contains(key)) fail("axes." + key, "unknown key");
  }
  space.diameter = axis_from_json(axes, "diameter");
  space.thickness = axis_from_json(axes, "thickness");
  space.stress = axis_from_json(axes, "stress");
  space.gap = axis_from_json(axes, "gap");
  space.hole_fraction = axis_from_json(axes, "hole_fraction");
  space.hole_side = axis_from_json(axes, "hole_side");
  return space;
}

DesignSpace load_space(const std::filesystem::path& path) {
  return space_from_json(parse_file(path, "space file"));
}

Constraints constraints_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("constraints file: top level must be a JSON object");
  static const std::set<std::string> known{"bias_v", "max_bias_fraction_of_pullin",
                                           "min_cutoff_hz", "min_capacitance_f"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) fail(key, "unknown key");
  }
  Constraints c;
  const auto number = [&](const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) fail(key, "must be a number");
    return j.at(key).get<double>();
  };
  c.bias = {number("bias_v", c.bias.si())};
  c.max_bias_fraction_of_pullin =
      number("max_bias_fraction_of_pullin", c.max_bias_fraction_of_pullin);
  c.min_cutoff = {number("min_cutoff_hz", c.min_cutoff.si())};
  c.min_capacitance = {number("min_capacitance_f", c.min_capacitance.si())};
  return c;
}

Constraints load_constraints(const std::filesystem::path& path) {
  return constraints_from_json(parse_file(path, "constraints file"));
}

json search_result_to_json(const SearchResult& result) {
  return json{
      {"best_design", design_to_json(result.best_design)},
      {"best_objective_v_per_pa", result.best_objective_v_per_pa},
      {"best_objective_db", result.best_objective_db},
      {"feasible_count", result.feasible_count},
      {"evaluated_count", result.evaluated_count},
      {"report", report_to_json(result.report)},
  };
}

}  // namespace capmic
