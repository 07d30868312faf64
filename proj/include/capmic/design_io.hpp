#pragma once

#include <filesystem>

#include <json.hpp>

#include "capmic/design.hpp"

namespace capmic {

/// Strict design-file schema: every key below is required except the
/// "environment" object and its members, which default to the documented
/// constants. Unknown keys are rejected at every level. All values are SI.
///
///   {
///     "diaphragm": {"diameter_m", "thickness_m", "residual_stress_pa",
///                   "density_kg_m3"},
///     "backplate": {"thickness_m", "hole_side_m", "hole_fraction",
///                   "diameter_m"},
///     "gap_m": <number>,
///     "environment": {"air_viscosity_pa_s", "epsilon0_f_m",
///                     "air_density_kg_m3"}
///   }
MicrophoneDesign design_from_json(const nlohmann::json& j);
nlohmann::json design_to_json(const MicrophoneDesign& design);

/// Reads and parses a design file; throws ValidationError on I/O, JSON, or
/// schema problems. Does not run validate() — callers decide.
MicrophoneDesign load_design(const std::filesystem::path& path);
void save_design(const MicrophoneDesign& design, const std::filesystem::path& path);

}  // namespace capmic
