// capmic: design analysis and optimization for capacitive MEMS microphones.
//
// Subcommands: analyze, freq, sweep, pullin, optimize. All file I/O is JSON,
// tabular output is CSV on stdout. Exit codes: 0 success, 2 invalid input,
// 3 infeasible or physically excluded operating point, 4 internal numeric
// self-check failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capmic/acoustics.hpp"
#include "capmic/design_io.hpp"
#include "capmic/errors.hpp"
#include "capmic/report.hpp"
#include "capmic/search_io.hpp"
#include "capmic/statics.hpp"

namespace {

using namespace capmic;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumericFailure = 4;

std::string csv_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

MicrophoneDesign load_valid_design(const std::string& path) {
  MicrophoneDesign design = load_design(path);
  require_valid(design);
  return design;
}

int cmd_analyze(const std::string& design_file, double bias_v, const std::string& format) {
  const MicrophoneDesign design = load_valid_design(design_file);
  const AnalysisReport report = analyze(design, Voltage{bias_v});
  if (format == "json") {
    std::cout << report_to_json(report).dump(2) << '\n';
  } else {
    std::cout << report_to_text(report);
  }
  return kExitOk;
}

int cmd_freq(const std::string& design_file, double bias_v, double fmin, double fmax,
             int points_per_decade) {
  if (!(fmin > 0.0) || !(fmin < fmax) || points_per_decade < 1) {
    throw ValidationError("bad frequency range: need 0 < fmin < fmax and points-per-decade >= 1");
  }
  const MicrophoneDesign design = load_valid_design(design_file);

  const double decades = std::log10(fmax / fmin);
  const int total = std::max(2, static_cast<int>(std::lround(points_per_decade * decades)) + 1);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    grid.push_back(fmin * std::pow(fmax / fmin, static_cast<double>(i) /
                                                    static_cast<double>(total - 1)));
  }

  const FrequencyResponse response = frequency_response(design, Voltage{bias_v}, grid);
  std::cout << "frequency_hz,magnitude_db_re_v_pa,phase_deg\n";
  for (const FrequencyPoint& p : response.points) {
    std::cout << csv_number(p.frequency_hz) << ',' << csv_number(p.magnitude_db) << ','
              << csv_number(p.phase_deg) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const std::string& design_file, const std::string& param, double from, double to,
              int steps, const std::string& metric, double bias_v) {
  static const std::vector<std::string> kParams{"diameter", "thickness",     "stress",
                                                "gap",      "hole_fraction", "hole_side"};
  static const std::vector<std::string> kMetrics{"S_m", "S_o_db", "V_p",
                                                 "C0",  "cutoff", "R_total"};
  if (std::find(kParams.begin(), kParams.end(), param) == kParams.end()) {
    throw ValidationError("unknown sweep parameter '" + param + "'");
  }
  if (std::find(kMetrics.begin(), kMetrics.end(), metric) == kMetrics.end()) {
    throw ValidationError("unknown metric '" + metric + "'");
  }
  if (steps < 2) throw ValidationError("steps must be >= 2");
  if (!std::isfinite(from) || !std::isfinite(to)) throw ValidationError("bad sweep range");

  const MicrophoneDesign base = load_valid_design(design_file);

  const auto apply = [&](double value) {
    MicrophoneDesign d = base;
    if (param == "diameter") d.diaphragm.diameter = {value};
    if (param == "thickness") d.diaphragm.thickness = {value};
    if (param == "stress") d.diaphragm.residual_stress = {value};
    if (param == "gap") d.gap = {value};
    if (param == "hole_fraction") d.backplate.hole_fraction = value;
    if (param == "hole_side") d.backplate.hole_side = {value};
    return d;
  };

  const auto evaluate = [&](const MicrophoneDesign& d) -> double {
    const Permittivity eps0 = d.environment.vacuum_permittivity;
    const MechSensitivity s_m = mechanical_sensitivity(d.diaphragm);
    if (metric == "S_m") return s_m.si();
    if (metric == "V_p") return pull_in_voltage(d.gap, s_m, eps0).si();
    if (metric == "C0") return (eps0 * d.diaphragm.area() / d.gap).si();
    if (metric == "R_total") return damping_breakdown(d).total.si();
    if (metric == "cutoff") {
      const LumpedModel m = lumped_model(d, Voltage{0.0});
      const std::optional<Frequency> cutoff = cutoff_from_model(m.resonance, m.damping_ratio);
      if (!cutoff) throw NumericError("flat beyond the 10*f0 search range");
      return cutoff->si();
    }
    // S_o_db needs the bias and therefore an operating point below pull-in.
    const AnalysisReport report = analyze(d, Voltage{bias_v});
    return report.s_o_db_re_1v_pa;
  };

  std::cout << "param_value,metric_value\n";
  for (int i = 0; i < steps; ++i) {
    const double value =
        from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    std::string cell = "nan";
    try {
      cell = csv_number(evaluate(apply(value)));
    } catch (const std::exception& e) {
      std::cerr << "warning: " << param << " = " << csv_number(value) << ": " << e.what()
                << '\n';
    }
    std::cout << csv_number(value) << ',' << cell << '\n';
  }
  return kExitOk;
}

int cmd_pullin(const std::string& design_file) {
  const MicrophoneDesign design = load_valid_design(design_file);
  const Voltage closed =
      pull_in_voltage(design.gap, mechanical_sensitivity(design.diaphragm),
                      design.environment.vacuum_permittivity);
  const Voltage numeric = pull_in_numeric(design);
  const double rel = std::abs(numeric.si() - closed.si()) / closed.si();
  std::cout << "closed_form_pull_in_v " << csv_number(closed.si()) << '\n';
  std::cout << "numeric_pull_in_v " << csv_number(numeric.si()) << " rel_diff "
            << csv_number(rel) << '\n';
  if (rel > 1e-3) {
    std::cerr << "error: numeric pull-in disagrees with the closed form by more than 0.1%\n";
    return kExitNumericFailure;
  }
  return kExitOk;
}

int cmd_optimize(const std::string& space_file, const std::string& constraints_file, int rounds,
                 const std::string& out_file) {
  if (rounds < 0) throw ValidationError("rounds must be >= 0");
  const DesignSpace space = load_space(space_file);
  const Constraints constraints = load_constraints(constraints_file);

  SearchResult result = grid_search(space, constraints);
  if (rounds > 0) {
    result = refine(space, constraints, result.best_design, rounds);
  }

  const std::string text = search_result_to_json(result).dump(2) + "\n";
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file: " + out_file);
    out << text;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Design analysis and optimization for capacitive MEMS microphones"};
  app.require_subcommand(1);

  std::string design_file;
  std::string format = "text";
  double bias_v = 12.0;

  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Full derived-quantity report for a design");
  analyze_cmd->add_option("design-file", design_file, "design JSON file")->required();
  analyze_cmd->add_option("--bias", bias_v, "bias voltage [V] (default 12)");
  analyze_cmd->add_option("--format", format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));

  double fmin = 20.0;
  double fmax = 100e3;
  int points_per_decade = 50;
  CLI::App* freq_cmd =
      app.add_subcommand("freq", "Frequency response CSV (magnitude dB re 1 V/Pa, phase deg)");
  freq_cmd->add_option("design-file", design_file, "design JSON file")->required();
  freq_cmd->add_option("--bias", bias_v, "bias voltage [V] (default 12)");
  freq_cmd->add_option("--fmin", fmin, "start frequency [Hz] (default 20)");
  freq_cmd->add_option("--fmax", fmax, "end frequency [Hz] (default 100000)");
  freq_cmd->add_option("--points-per-decade", points_per_decade,
                       "grid density (default 50)");

  std::string param;
  std::string metric;
  double from = 0.0;
  double to = 0.0;
  int steps = 0;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Sweep one parameter (SI units), print param_value,metric_value CSV");
  sweep_cmd->add_option("design-file", design_file, "design JSON file")->required();
  sweep_cmd
      ->add_option("--param", param,
                   "diameter|thickness|stress|gap|hole_fraction|hole_side (diameter sweeps the "
                   "diaphragm)")
      ->required();
  sweep_cmd->add_option("--from", from, "start value [SI]")->required();
  sweep_cmd->add_option("--to", to, "end value [SI]")->required();
  sweep_cmd->add_option("--steps", steps, "number of points (>= 2)")->required();
  sweep_cmd->add_option("--metric", metric, "S_m|S_o_db|V_p|C0|cutoff|R_total")->required();
  sweep_cmd->add_option("--bias", bias_v, "bias voltage [V] for S_o_db (default 12)");

  CLI::App* pullin_cmd =
      app.add_subcommand("pullin", "Closed-form vs numeric pull-in voltage self-check");
  pullin_cmd->add_option("design-file", design_file, "design JSON file")->required();

  std::string space_file;
  std::string constraints_file;
  std::string out_file;
  int rounds = 3;
  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "Constrained grid search for maximum open-circuit sensitivity");
  optimize_cmd->add_option("space-file", space_file, "design-space JSON file")->required();
  optimize_cmd->add_option("constraints-file", constraints_file, "constraints JSON file")
      ->required();
  optimize_cmd->add_option("--rounds", rounds, "interval-halving refinement rounds (default 3)");
  optimize_cmd->add_option("--out", out_file, "write the result JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitInvalidInput;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(design_file, bias_v, format);
    if (freq_cmd->parsed()) return cmd_freq(design_file, bias_v, fmin, fmax, points_per_decade);
    if (sweep_cmd->parsed()) return cmd_sweep(design_file, param, from, to, steps, metric, bias_v);
    if (pullin_cmd->parsed()) return cmd_pullin(design_file);
    if (optimize_cmd->parsed())
      return cmd_optimize(space_file, constraints_file, rounds, out_file);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const PullInError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumericFailure;
  }
  return kExitInvalidInput;
}
