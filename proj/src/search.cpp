#include "capmic/search.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "capmic/acoustics.hpp"
#include "capmic/errors.hpp"
#include "capmic/statics.hpp"

namespace capmic {
namespace {

void check_axis(const AxisSpec& axis, const std::string& name) {
  if (!std::isfinite(axis.lower) || !std::isfinite(axis.upper)) {
    throw ValidationError("space axis " + name + ": bounds must be finite");
  }
  if (axis.lower > axis.upper) {
    throw ValidationError("space axis " + name + ": lower > upper");
  }
  if (axis.count < 1) {
    throw ValidationError("space axis " + name + ": step count must be >= 1");
  }
}

struct Candidate {
  ParameterVector params{};
  double objective{};
};

// Deterministic comparator: larger objective wins, exact ties go to the
// lexicographically smallest parameter vector.
bool better(const Candidate& a, const Candidate& b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  return a.params < b.params;
}

SearchResult finish(const DesignSpace& space, const Constraints& constraints,
                    const std::optional<Candidate>& best, std::int64_t feasible_count,
                    std::int64_t evaluated_count) {
  if (!best) {
    throw InfeasibleError("no feasible design in the search space");
  }
  SearchResult result;
  result.best_design = design_at(space, best->params);
  result.best_params = best->params;
  result.best_objective_v_per_pa = best->objective;
  result.best_objective_db = sensitivity_to_db(OpenCircuitSensitivity{best->objective});
  result.feasible_count = feasible_count;
  result.evaluated_count = evaluated_count;
  // The winner must re-verify as feasible; anything else is an internal bug.
  if (!feasible(result.best_design, constraints).ok) {
    throw NumericError("search returned an infeasible design (internal inconsistency)");
  }
  result.report = analyze(result.best_design, constraints.bias);
  return result;
}

double objective_value(const MicrophoneDesign& design, const Constraints& constraints) {
  const MechSensitivity s_m = mechanical_sensitivity(design.diaphragm);
  return open_circuit_sensitivity(s_m, electrical_sensitivity(constraints.bias, design.gap)).si();
}

SearchResult grid_search_impl(const DesignSpace& space, const Constraints& constraints,
                              const std::optional<ParameterVector>& extra_candidate) {
  check_axis(space.diameter, "diameter");
  check_axis(space.thickness, "thickness");
  check_axis(space.stress, "stress");
  check_axis(space.gap, "gap");
  check_axis(space.hole_fraction, "hole_fraction");
  check_axis(space.hole_side, "hole_side");

  const std::array<std::vector<double>, 6> axes{
      axis_values(space.diameter),     axis_values(space.thickness),
      axis_values(space.stress),       axis_values(space.gap),
      axis_values(space.hole_fraction), axis_values(space.hole_side)};

  std::optional<Candidate> best;
  std::int64_t feasible_count = 0;
  std::int64_t evaluated_count = 0;

  const auto consider = [&](const ParameterVector& params, bool count_it) {
    const MicrophoneDesign design = design_at(space, params);
    require_valid(design);
    if (count_it) ++evaluated_count;
    if (!feasible(design, constraints).ok) return;
    if (count_it) ++feasible_count;
    const Candidate candidate{params, objective_value(design, constraints)};
    if (!best || better(candidate, *best)) best = candidate;
  };

  ParameterVector params{};
  for (double v0 : axes[0]) {
    params[0] = v0;
    for (double v1 : axes[1]) {
      params[1] = v1;
      for (double v2 : axes[2]) {
        params[2] = v2;
        for (double v3 : axes[3]) {
          params[3] = v3;
          for (double v4 : axes[4]) {
            params[4] = v4;
            for (double v5 : axes[5]) {
              params[5] = v5;
              consider(params, true);
            }
          }
        }
      }
    }
  }
  if (extra_candidate) consider(*extra_candidate, false);

  return finish(space, constraints, best, feasible_count, evaluated_count);
}

ParameterVector params_of(const MicrophoneDesign& design) {
  return {design.diaphragm.diameter.si(), design.diaphragm.thickness.si(),
          design.diaphragm.residual_stress.si(), design.gap.si(),
          design.backplate.hole_fraction, design.backplate.hole_side.si()};
}

AxisSpec halved_around(const AxisSpec& original, const AxisSpec& current, double center) {
  const double width = (current.upper - current.lower) / 2.0;
  AxisSpec next;
  next.lower = std::max(original.lower, center - width / 2.0);
  next.upper = std::min(original.upper, center + width / 2.0);
  next.count = current.count;
  return next;
}

}  // namespace

std::vector<double> axis_values(const AxisSpec& axis) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(axis.count));
  if (axis.count == 1) {
    values.push_back(axis.lower);
    return values;
  }
  for (int i = 0; i < axis.count; ++i) {
    values.push_back(axis.lower +
                     (axis.upper - axis.lower) * static_cast<double>(i) /
                         static_cast<double>(axis.count - 1));
  }
  return values;
}

MicrophoneDesign design_at(const DesignSpace& space, const ParameterVector& params) {
  MicrophoneDesign design = space.base;
  design.diaphragm.diameter = {params[0]};
  design.diaphragm.thickness = {params[1]};
  design.diaphragm.residual_stress = {params[2]};
  design.gap = {params[3]};
  design.backplate.hole_fraction = params[4];
  design.backplate.hole_side = {params[5]};
  return design;
}

Feasibility feasible(const MicrophoneDesign& design, const Constraints& constraints) {
  require_valid(design);
  if (!(constraints.max_bias_fraction_of_pullin > 0.0 &&
        constraints.max_bias_fraction_of_pullin < 1.0)) {
    throw ValidationError("max_bias_fraction_of_pullin must be in (0, 1)");
  }
  if (!(constraints.min_cutoff.si() > 0.0)) {
    throw ValidationError("min_cutoff must be > 0");
  }

  Feasibility result;
  const Permittivity eps0 = design.environment.vacuum_permittivity;
  const MechSensitivity s_m = mechanical_sensitivity(design.diaphragm);
  const Voltage v_p = pull_in_voltage(design.gap, s_m, eps0);

  const Voltage bias_limit = constraints.max_bias_fraction_of_pullin * v_p;
  if (constraints.bias > bias_limit) {
    result.reasons.push_back("bias margin: bias exceeds " +
                             std::to_string(constraints.max_bias_fraction_of_pullin) +
                             " * pull-in (" + std::to_string(bias_limit.si()) + " V)");
  }

  // The normalized response is bias-independent, so the cutoff can be
  // evaluated even when the bias constraint already failed.
  const Area area = design.diaphragm.area();
  const Stiffness k = area / s_m;
  const Mass m_eff = design.diaphragm.density * design.diaphragm.thickness * area / 3.0;
  const Frequency f0 = sqrt(k / m_eff) / (2.0 * std::numbers::pi);
  const double zeta = (damping_breakdown(design).total / (2.0 * sqrt(k * m_eff))).si();
  const std::optional<Frequency> cutoff = cutoff_from_model(f0, zeta);
  if (cutoff && *cutoff < constraints.min_cutoff) {
    result.reasons.push_back("cutoff: " + std::to_string(cutoff->si()) + " Hz below " +
                             std::to_string(constraints.min_cutoff.si()) + " Hz");
  }

  const Capacitance c0 = eps0 * area / design.gap;
  if (c0 < constraints.min_capacitance) {
    result.reasons.push_back("capacitance: C0 " + std::to_string(c0.si() * 1e12) +
                             " pF below " +
                             std::to_string(constraints.min_capacitance.si() * 1e12) + " pF");
  }

  result.ok = result.reasons.empty();
  return result;
}

SearchResult grid_search(const DesignSpace& space, const Constraints& constraints) {
  return grid_search_impl(space, constraints, std::nullopt);
}

SearchResult refine(const DesignSpace& space, const Constraints& constraints,
                    const MicrophoneDesign& incumbent, int rounds) {
  if (rounds < 0) throw ValidationError("rounds must be >= 0");
  require_valid(incumbent);
  if (!feasible(incumbent, constraints).ok) {
    throw ValidationError("refine: incumbent design is not feasible");
  }
  // Grid points inherit every non-axis field from the space's base design, so
  // an incumbent that differs there would silently change identity.
  const MicrophoneDesign rebuilt = design_at(space, params_of(incumbent));
  if (rebuilt.diaphragm.density.si() != incumbent.diaphragm.density.si() ||
      rebuilt.backplate.thickness.si() != incumbent.backplate.thickness.si() ||
      rebuilt.backplate.diameter.si() != incumbent.backplate.diameter.si() ||
      rebuilt.environment.air_viscosity.si() != incumbent.environment.air_viscosity.si() ||
      rebuilt.environment.vacuum_permittivity.si() !=
          incumbent.environment.vacuum_permittivity.si() ||
      rebuilt.environment.air_density.si() != incumbent.environment.air_density.si()) {
    throw ValidationError("refine: incumbent does not belong to the space (non-axis fields "
                          "differ from the base design)");
  }

  ParameterVector center = params_of(incumbent);
  if (rounds == 0) {
    SearchResult result;
    result.best_design = incumbent;
    result.best_params = center;
    result.best_objective_v_per_pa = objective_value(incumbent, constraints);
    result.best_objective_db =
        sensitivity_to_db(OpenCircuitSensitivity{result.best_objective_v_per_pa});
    result.feasible_count = 0;
    result.evaluated_count = 0;
    result.report = analyze(incumbent, constraints.bias);
    return result;
  }

  DesignSpace current = space;
  SearchResult result;
  for (int round = 0; round < rounds; ++round) {
    current.diameter = halved_around(space.diameter, current.diameter, center[0]);
    current.thickness = halved_around(space.thickness, current.thickness, center[1]);
    current.stress = halved_around(space.stress, current.stress, center[2]);
    current.gap = halved_around(space.gap, current.gap, center[3]);
    current.hole_fraction = halved_around(space.hole_fraction, current.hole_fraction, center[4]);
    current.hole_side = halved_around(space.hole_side, current.hole_side, center[5]);
    result = grid_search_impl(current, constraints, center);
    center = result.best_params;
  }
  return result;
}

}  // namespace capmic
