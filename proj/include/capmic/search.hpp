#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "capmic/design.hpp"
#include "capmic/report.hpp"

namespace capmic {

/// Closed interval with a point count; count == 1 pins the value at `lower`.
struct AxisSpec {
  double lower{};
  double upper{};
  int count{1};
};

/// Grid axes in the documented tie-break order: diameter (diaphragm),
/// thickness, stress, gap, hole_fraction, hole_side. Everything else is taken
/// from `base`.
struct DesignSpace {
  MicrophoneDesign base;
  AxisSpec diameter;
  AxisSpec thickness;
  AxisSpec stress;
  AxisSpec gap;
  AxisSpec hole_fraction;
  AxisSpec hole_side;
};

struct Constraints {
  Voltage bias{12.0};
  double max_bias_fraction_of_pullin{0.6};
  Frequency min_cutoff{20e3};
  Capacitance min_capacitance{1e-12};
};

struct Feasibility {
  bool ok{};
  std::vector<std::string> reasons;  // every failed constraint, fixed order
};

using ParameterVector = std::array<double, 6>;

struct SearchResult {
  MicrophoneDesign best_design;
  ParameterVector best_params{};
  double best_objective_v_per_pa{};
  double best_objective_db{};
  std::int64_t feasible_count{};
  std::int64_t evaluated_count{};
  AnalysisReport report;
};

/// True iff bias <= fraction*V_p, cutoff >= min_cutoff, and C0 >=
/// min_capacitance. Never throws for a valid design: the cutoff is evaluated
/// from the bias-independent normalized response.
Feasibility feasible(const MicrophoneDesign& design, const Constraints& constraints);

/// Exhaustive evaluation of the grid in lexicographic parameter order.
/// Objective: S_o at the constraint bias. Ties broken toward the
/// lexicographically smallest parameter vector; the comparator makes the
/// result independent of evaluation order. Throws ValidationError for an
/// invalid space or grid point, InfeasibleError when no point is feasible.
SearchResult grid_search(const DesignSpace& space, const Constraints& constraints);

/// Interval-halving refinement around a feasible incumbent. Each round halves
/// every axis interval around the incumbent (clipped to the original bounds),
/// keeps the per-axis counts, and re-runs grid_search with the incumbent as an
/// extra candidate, so the objective never decreases. rounds == 0 returns the
/// incumbent unchanged (counts 0).
SearchResult refine(const DesignSpace& space, const Constraints& constraints,
                    const MicrophoneDesign& incumbent, int rounds);

/// The design at one grid point: diameter applies to the diaphragm only.
MicrophoneDesign design_at(const DesignSpace& space, const ParameterVector& params);

/// Axis values lower + i*(upper-lower)/(count-1); count == 1 yields {lower}.
std::vector<double> axis_values(const AxisSpec& axis);

}  // namespace capmic
