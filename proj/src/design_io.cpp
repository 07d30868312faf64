#include "capmic/design_io.hpp"

#include <fstream>
#include <set>
#include <string>

#include "capmic/errors.hpp"

namespace capmic {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ValidationError("design file: " + path + ": " + why);
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json& require_object(const json& parent, const std::string& path, const std::string& key) {
  if (!parent.contains(key)) fail(path.empty() ? key : path + "." + key, "missing");
  const json& j = parent.at(key);
  if (!j.is_object()) fail(path.empty() ? key : path + "." + key, "must be an object");
  return j;
}

double require_number(const json& parent, const std::string& path, const std::string& key) {
  const std::string full = path.empty() ? key : path + "." + key;
  if (!parent.contains(key)) fail(full, "missing");
  const json& j = parent.at(key);
  if (!j.is_number()) fail(full, "must be a number");
  return j.get<double>();
}

double optional_number(const json& parent, const std::string& path, const std::string& key,
                       double fallback) {
  if (!parent.contains(key)) return fallback;
  const std::string full = path.empty() ? key : path + "." + key;
  const json& j = parent.at(key);
  if (!j.is_number()) fail(full, "must be a number");
  return j.get<double>();
}

}  // namespace

MicrophoneDesign design_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("design file: top level must be a JSON object");
  reject_unknown_keys(j, "", {"diaphragm", "backplate", "gap_m", "environment"});

  MicrophoneDesign d;

  const json& dia = require_object(j, "", "diaphragm");
  reject_unknown_keys(dia, "diaphragm",
                      {"diameter_m", "thickness_m", "residual_stress_pa", "density_kg_m3"});
  d.diaphragm.diameter = {require_number(dia, "diaphragm", "diameter_m")};
  d.diaphragm.thickness = {require_number(dia, "diaphragm", "thickness_m")};
  d.diaphragm.residual_stress = {require_number(dia, "diaphragm", "residual_stress_pa")};
  d.diaphragm.density = {require_number(dia, "diaphragm", "density_kg_m3")};

  const json& bp = require_object(j, "", "backplate");
  reject_unknown_keys(bp, "backplate",
                      {"thickness_m", "hole_side_m", "hole_fraction", "diameter_m"});
  d.backplate.thickness = {require_number(bp, "backplate", "thickness_m")};
  d.backplate.hole_side = {require_number(bp, "backplate", "hole_side_m")};
  d.backplate.hole_fraction = require_number(bp, "backplate", "hole_fraction");
  d.backplate.diameter = {require_number(bp, "backplate", "diameter_m")};

  d.gap = {require_number(j, "", "gap_m")};

  if (j.contains("environment")) {
    const json& env = require_object(j, "", "environment");
    reject_unknown_keys(env, "environment",
                        {"air_viscosity_pa_s", "epsilon0_f_m", "air_density_kg_m3"});
    d.environment.air_viscosity = {optional_number(env, "environment", "air_viscosity_pa_s",
                                                   defaults::air_viscosity.si())};
    d.environment.vacuum_permittivity = {
        optional_number(env, "environment", "epsilon0_f_m", defaults::vacuum_permittivity.si())};
    d.environment.air_density = {
        optional_number(env, "environment", "air_density_kg_m3", defaults::air_density.si())};
  }
  return d;
}

json design_to_json(const MicrophoneDesign& d) {
  return json{
      {"diaphragm",
       {{"diameter_m", d.diaphragm.diameter.si()},
        {"thickness_m", d.diaphragm.thickness.si()},
        {"residual_stress_pa", d.diaphragm.residual_stress.si()},
        {"density_kg_m3", d.diaphragm.density.si()}}},
      {"backplate",
       {{"thickness_m", d.backplate.thickness.si()},
        {"hole_side_m", d.backplate.hole_side.si()},
        {"hole_fraction", d.backplate.hole_fraction},
        {"diameter_m", d.backplate.diameter.si()}}},
      {"gap_m", d.gap.si()},
      {"environment",
       {{"air_viscosity_pa_s", d.environment.air_viscosity.si()},
        {"epsilon0_f_m", d.environment.vacuum_permittivity.si()},
        {"air_density_kg_m3", d.environment.air_density.si()}}},
  };
}

MicrophoneDesign load_design(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open design file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("design file " + path.string() + ": " + e.what());
  }
  return design_from_json(j);
}

void save_design(const MicrophoneDesign& design, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write design file: " + path.string());
  out << design_to_json(design).dump(2) << '\n';
}

}  // namespace capmic
