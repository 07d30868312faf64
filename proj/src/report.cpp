#include "capmic/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "capmic/acoustics.hpp"
#include "capmic/errors.hpp"
#include "capmic/statics.hpp"

namespace capmic {
namespace {

constexpr double kSelfCheckTolerance = 1e-3;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

void note_default(std::vector<std::string>& notes, double used, double fallback,
                  const std::string& text) {
  if (used == fallback) notes.push_back(text);
}

}  // namespace

AnalysisReport analyze(const MicrophoneDesign& design, Voltage bias) {
  require_valid(design);
  if (bias.si() < 0.0) throw ValidationError("bias must be >= 0");

  const Permittivity eps0 = design.environment.vacuum_permittivity;
  const MechSensitivity s_m = mechanical_sensitivity(design.diaphragm);
  const Voltage v_p = pull_in_voltage(design.gap, s_m, eps0);
  if (bias >= v_p) {
    throw PullInError("bias " + std::to_string(bias.si()) +
                      " V is at or above the pull-in voltage " + std::to_string(v_p.si()) + " V");
  }

  const Voltage v_p_numeric = pull_in_numeric(design);
  const double rel_diff = std::abs(v_p_numeric.si() - v_p.si()) / v_p.si();
  if (rel_diff > kSelfCheckTolerance) {
    throw NumericError("numeric pull-in " + std::to_string(v_p_numeric.si()) +
                       " V disagrees with the closed form " + std::to_string(v_p.si()) +
                       " V by " + std::to_string(rel_diff * 100.0) + "%");
  }

  const ElecSensitivity s_e = electrical_sensitivity(bias, design.gap);
  const OpenCircuitSensitivity s_o = open_circuit_sensitivity(s_m, s_e);
  const Capacitance c0 = eps0 * design.diaphragm.area() / design.gap;
  const DampingBreakdown damping = damping_breakdown(design);
  const LumpedModel model = lumped_model(design, bias);
  const std::optional<Frequency> cutoff = cutoff_from_model(model.resonance, model.damping_ratio);

  AnalysisReport report;
  report.bias_v = bias.si();
  report.s_m_m_per_pa = s_m.si();
  report.s_e_v_per_m = s_e.si();
  report.s_o_v_per_pa = s_o.si();
  report.s_o_db_re_1v_pa = sensitivity_to_db(s_o);
  report.s_o_max_v_per_pa = max_open_circuit_sensitivity(design.gap, s_m, eps0).si();
  report.pull_in_closed_form_v = v_p.si();
  report.pull_in_numeric_v = v_p_numeric.si();
  report.pull_in_rel_difference = rel_diff;
  report.c0_f = c0.si();
  report.r_gap_n_s_per_m = damping.gap_resistance.si();
  report.r_hole_n_s_per_m = damping.hole_resistance.si();
  report.r_total_n_s_per_m = damping.total.si();
  report.hole_count = damping.hole_count;
  report.equivalent_hole_radius_m = damping.equivalent_hole_radius.si();
  report.resonance_hz = model.resonance.si();
  report.damping_ratio = model.damping_ratio;
  if (cutoff) report.cutoff_hz = cutoff->si();

  note_default(report.assumptions, design.diaphragm.density.si(),
               defaults::diaphragm_density.si(),
               "diaphragm density " + fmt(design.diaphragm.density.si()) +
                   " kg/m^3 is the conventional polyimide value, not a measured property");
  note_default(report.assumptions, design.environment.air_viscosity.si(),
               defaults::air_viscosity.si(),
               "air viscosity " + fmt(design.environment.air_viscosity.si()) +
                   " Pa*s is the standard value for air near 20 C");
  report.assumptions.push_back(
      "open-circuit values only: parasitic capacitance and preamplifier loading are not "
      "modeled and reduce the sensitivity measured on a packaged device");
  return report;
}

nlohmann::json report_to_json(const AnalysisReport& r) {
  nlohmann::json j{
      {"bias_v", r.bias_v},
      {"s_m_m_per_pa", r.s_m_m_per_pa},
      {"s_e_v_per_m", r.s_e_v_per_m},
      {"s_o_v_per_pa", r.s_o_v_per_pa},
      {"s_o_db_re_1v_pa", r.s_o_db_re_1v_pa},
      {"s_o_max_v_per_pa", r.s_o_max_v_per_pa},
      {"pull_in_closed_form_v", r.pull_in_closed_form_v},
      {"pull_in_numeric_v", r.pull_in_numeric_v},
      {"pull_in_rel_difference", r.pull_in_rel_difference},
      {"c0_f", r.c0_f},
      {"r_gap_n_s_per_m", r.r_gap_n_s_per_m},
      {"r_hole_n_s_per_m", r.r_hole_n_s_per_m},
      {"r_total_n_s_per_m", r.r_total_n_s_per_m},
      {"hole_count", r.hole_count},
      {"equivalent_hole_radius_m", r.equivalent_hole_radius_m},
      {"resonance_hz", r.resonance_hz},
      {"damping_ratio", r.damping_ratio},
      {"assumptions", r.assumptions},
  };
  if (r.cutoff_hz) {
    j["cutoff_hz"] = *r.cutoff_hz;
  } else {
    j["cutoff_hz"] = nullptr;
  }
  return j;
}

std::string report_to_text(const AnalysisReport& r) {
  std::string out;
  auto line = [&out](const std::string& label, const std::string& value) {
    out += label;
    out.append(label.size() < 34 ? 34 - label.size() : 1, ' ');
    out += value + "\n";
  };
  line("bias", fmt(r.bias_v) + " V");
  line("mechanical sensitivity S_m", fmt(r.s_m_m_per_pa * 1e9) + " nm/Pa");
  line("electrical sensitivity S_e", fmt(r.s_e_v_per_m) + " V/m");
  line("open-circuit sensitivity S_o", fmt(r.s_o_v_per_pa) + " V/Pa (" +
                                           fmt(r.s_o_db_re_1v_pa) + " dB re 1 V/Pa)");
  line("open-circuit bound at pull-in", fmt(r.s_o_max_v_per_pa) + " V/Pa");
  line("pull-in voltage (closed form)", fmt(r.pull_in_closed_form_v) + " V");
  line("pull-in voltage (numeric)", fmt(r.pull_in_numeric_v) + " V (rel diff " +
                                        fmt(r.pull_in_rel_difference) + ")");
  line("rest capacitance C0", fmt(r.c0_f * 1e12) + " pF");
  line("gap resistance R_a", fmt(r.r_gap_n_s_per_m) + " N*s/m");
  line("hole resistance R_h", fmt(r.r_hole_n_s_per_m) + " N*s/m");
  line("total damping", fmt(r.r_total_n_s_per_m) + " N*s/m");
  line("acoustic holes", fmt(r.hole_count) + " (equivalent radius " +
                             fmt(r.equivalent_hole_radius_m * 1e6) + " um)");
  line("resonance f0", fmt(r.resonance_hz / 1e3) + " kHz");
  line("damping ratio zeta", fmt(r.damping_ratio));
  line("-3 dB cutoff", r.cutoff_hz ? fmt(*r.cutoff_hz / 1e3) + " kHz"
                                   : std::string("flat beyond 10*f0"));
  out += "notes:\n";
  for (const std::string& note : r.assumptions) {
    out += "  - " + note + "\n";
  }
  return out;
}

}  // namespace capmic
