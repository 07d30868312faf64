#include "capmic/statics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "capmic/errors.hpp"

namespace capmic {
namespace {

constexpr double kPi = std::numbers::pi;

// Relative bisection tolerance for the equilibrium root, scaled by the gap.
constexpr double kRootTolerance = 1e-10;

// Relative width at which the pull-in voltage bisection stops.
constexpr double kPullInTolerance = 1e-6;

// Upper limit of the pull-in doubling search.
constexpr double kPullInVoltageCap = 1e9;

struct PistonProblem {
  MechSensitivity s_m;
  Permittivity eps0;
  Length gap;
  Pressure pressure;

  // Net displacement residual h(x) = S_m*(P + p_elec(x)) - x; the stable root
  // is its first zero crossing from above.
  Length residual(Length x, Voltage bias) const {
    const Length remaining = gap - x;
    const Pressure electrostatic{eps0.si() * bias.si() * bias.si() /
                                 (2.0 * remaining.si() * remaining.si())};
    return Length{s_m.si() * (pressure.si() + electrostatic.si())} - x;
  }
};

// Bisection for the stable root on [0, hi]. Returns a negative length when
// the bracket has no sign change (no stable equilibrium).
Length solve_stable_root(const PistonProblem& prob, Voltage bias, Length hi) {
  const Length zero{0.0};
  const Length r0 = prob.residual(zero, bias);
  if (r0.si() <= 0.0) return zero;  // zero load: the root is x = 0
  if (prob.residual(hi, bias).si() > 0.0) return Length{-1.0};

  double lo = 0.0;
  double up = hi.si();
  const double tol = kRootTolerance * prob.gap.si();
  while (up - lo > tol) {
    const double mid = 0.5 * (lo + up);
    if (prob.residual(Length{mid}, bias).si() > 0.0) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return Length{0.5 * (lo + up)};
}

PistonProblem make_problem(const MicrophoneDesign& design, Pressure pressure) {
  return {mechanical_sensitivity(design.diaphragm), design.environment.vacuum_permittivity,
          design.gap, pressure};
}

}  // namespace

MechSensitivity mechanical_sensitivity(const Diaphragm& diaphragm) {
  return diaphragm.area() /
         (8.0 * kPi * diaphragm.residual_stress * diaphragm.thickness);
}

Pressure stress_from_sensitivity(const Diaphragm& geometry, MechSensitivity measured) {
  if (!(measured.si() > 0.0)) {
    throw ValidationError("measured mechanical sensitivity must be > 0");
  }
  return geometry.area() / (8.0 * kPi * geometry.thickness * measured);
}

ElecSensitivity electrical_sensitivity(Voltage bias, Length gap) {
  if (!(gap.si() > 0.0)) throw ValidationError("gap must be > 0");
  if (bias.si() < 0.0) throw ValidationError("bias must be >= 0");
  return bias / gap;
}

OpenCircuitSensitivity open_circuit_sensitivity(MechSensitivity s_m, ElecSensitivity s_e) {
  return s_m * s_e;
}

Voltage pull_in_voltage(Length gap, MechSensitivity s_m, Permittivity eps0) {
  if (!(gap.si() > 0.0)) throw ValidationError("gap must be > 0");
  if (!(s_m.si() > 0.0)) throw ValidationError("mechanical sensitivity must be > 0");
  return sqrt((8.0 / 27.0) * cube(gap) / (eps0 * s_m));
}

OpenCircuitSensitivity max_open_circuit_sensitivity(Length gap, MechSensitivity s_m,
                                                    Permittivity eps0) {
  if (!(gap.si() > 0.0)) throw ValidationError("gap must be > 0");
  if (!(s_m.si() >= 0.0)) throw ValidationError("mechanical sensitivity must be >= 0");
  return sqrt(8.0 * gap * s_m / (27.0 * eps0));
}

StaticState equilibrium(const MicrophoneDesign& design, const OperatingPoint& op) {
  require_valid(design);
  if (op.bias.si() < 0.0) throw ValidationError("bias must be >= 0");
  if (op.static_pressure.si() < 0.0) throw ValidationError("static pressure must be >= 0");

  const PistonProblem prob = make_problem(design, op.static_pressure);
  const Voltage v_p = pull_in_voltage(design.gap, prob.s_m, prob.eps0);
  if (op.bias >= v_p) {
    throw PullInError("bias " + std::to_string(op.bias.si()) +
                      " V is at or above the pull-in voltage " + std::to_string(v_p.si()) + " V");
  }

  const Length offset{prob.s_m.si() * op.static_pressure.si()};
  const Length hi = design.gap / 3.0 + offset;
  if (hi >= design.gap) {
    throw PullInError("static pressure drives the diaphragm into the backplate");
  }

  const Length x = solve_stable_root(prob, op.bias, hi);
  if (x.si() < 0.0) {
    throw NumericError("no stable equilibrium in the bracket (combined bias and pressure load)");
  }

  const Length remaining = design.gap - x;
  const Capacitance c = prob.eps0 * design.diaphragm.area() / remaining;
  return {x, remaining, c, true};
}

Voltage pull_in_numeric(const MicrophoneDesign& design) {
  require_valid(design);
  const PistonProblem prob = make_problem(design, Pressure{0.0});
  const Length hi = design.gap / 3.0;

  const auto equilibrium_exists = [&](double bias_v) {
    return solve_stable_root(prob, Voltage{bias_v}, hi).si() >= 0.0;
  };

  // Double until equilibrium is lost, then bisect the existence boundary.
  double lo = 0.0;
  double up = 1.0;
  while (equilibrium_exists(up)) {
    lo = up;
    up *= 2.0;
    if (up > kPullInVoltageCap) {
      throw NumericError("pull-in voltage beyond the numeric search range");
    }
  }
  while (up - lo > kPullInTolerance * up) {
    const double mid = 0.5 * (lo + up);
    if (equilibrium_exists(mid)) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return Voltage{0.5 * (lo + up)};
}

std::vector<std::pair<Pressure, Capacitance>> capacitance_vs_pressure(
    const MicrophoneDesign& design, Voltage bias, std::span<const Pressure> pressures) {
  std::vector<std::pair<Pressure, Capacitance>> out;
  out.reserve(pressures.size());
  for (std::size_t i = 0; i < pressures.size(); ++i) {
    try {
      const StaticState state = equilibrium(design, {bias, pressures[i]});
      out.emplace_back(pressures[i], state.capacitance);
    } catch (const PullInError& e) {
      throw PullInError("pressure index " + std::to_string(i) + ": " + e.what());
    } catch (const NumericError& e) {
      throw PullInError("pressure index " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

Capacitance capacitance_profile(const MicrophoneDesign& design, Length center_deflection) {
  require_valid(design);
  const double d = design.gap.si();
  const double w0 = center_deflection.si();
  if (w0 < 0.0 || w0 >= d) {
    throw ValidationError("center deflection must lie in [0, gap)");
  }
  const Capacitance flat =
      design.environment.vacuum_permittivity * design.diaphragm.area() / design.gap;
  const double u = w0 / d;
  if (u < 1e-6) {
    // -ln(1-u)/u = 1 + u/2 + u^2/3 + O(u^3); the truncation error is below
    // double precision in this range.
    return flat * (1.0 + u / 2.0 + u * u / 3.0);
  }
  return flat * (-std::log1p(-u) / u);
}

}  // namespace capmic
