#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "capmic/design.hpp"

namespace capmic {

/// Every derived scalar of a design at one bias point. Field names carry the
/// unit; all values are SI except the dB figure.
struct AnalysisReport {
  double bias_v{};
  double s_m_m_per_pa{};
  double s_e_v_per_m{};
  double s_o_v_per_pa{};
  double s_o_db_re_1v_pa{};
  double s_o_max_v_per_pa{};  // open-circuit bound at the pull-in limit
  double pull_in_closed_form_v{};
  double pull_in_numeric_v{};
  double pull_in_rel_difference{};
  double c0_f{};
  double r_gap_n_s_per_m{};
  double r_hole_n_s_per_m{};
  double r_total_n_s_per_m{};
  double hole_count{};
  double equivalent_hole_radius_m{};
  double resonance_hz{};
  double damping_ratio{};
  std::optional<double> cutoff_hz;  // nullopt: still flat at the 10*f0 search limit
  std::vector<std::string> assumptions;
};

/// Computes the full report. Throws ValidationError on an invalid design,
/// PullInError when bias >= pull-in, and NumericError when the numeric
/// pull-in disagrees with the closed form by more than 0.1% (self-check).
AnalysisReport analyze(const MicrophoneDesign& design, Voltage bias);

nlohmann::json report_to_json(const AnalysisReport& report);
std::string report_to_text(const AnalysisReport& report);

}  // namespace capmic
