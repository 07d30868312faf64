#pragma once

#include <filesystem>

#include <json.hpp>

#include "capmic/search.hpp"

namespace capmic {

/// space.json: {"base": <design schema>, "axes": {"diameter", "thickness",
/// "stress", "gap", "hole_fraction", "hole_side"}} where each axis is
/// {"lower": x, "upper": y, "count": n}. All six axes required, SI values,
/// unknown keys rejected.
DesignSpace space_from_json(const nlohmann::json& j);
DesignSpace load_space(const std::filesystem::path& path);

/// constraints.json: {"bias_v", "max_bias_fraction_of_pullin",
/// "min_cutoff_hz", "min_capacitance_f"}, each optional with the documented
/// default. Unknown keys rejected.
Constraints constraints_from_json(const nlohmann::json& j);
Constraints load_constraints(const std::filesystem::path& path);

nlohmann::json search_result_to_json(const SearchResult& result);

}  // namespace capmic
