#pragma once

#include <span>
#include <utility>
#include <vector>

#include "capmic/design.hpp"

namespace capmic {

struct OperatingPoint {
  Voltage bias;
  Pressure static_pressure;  // gauge, uniform on the diaphragm
};

/// Solution record of the electrostatic equilibrium.
struct StaticState {
  Length piston_deflection;
  Length gap_remaining;
  Capacitance capacitance;
  bool stable{};
};

/// Deflection per unit pressure of the tensioned diaphragm at low frequency:
/// S_m = A / (8*pi*sigma*h).
MechSensitivity mechanical_sensitivity(const Diaphragm& diaphragm);

/// Exact inversion of mechanical_sensitivity: sigma = A / (8*pi*h*S_m).
/// Uses the diameter and thickness of `geometry`; its stress field is ignored.
/// Throws ValidationError for non-positive S_m.
Pressure stress_from_sensitivity(const Diaphragm& geometry, MechSensitivity measured);

/// S_e = V_b / d. Throws ValidationError for gap <= 0 or bias < 0.
ElecSensitivity electrical_sensitivity(Voltage bias, Length gap);

/// S_o = S_m * S_e.
OpenCircuitSensitivity open_circuit_sensitivity(MechSensitivity s_m, ElecSensitivity s_e);

/// Pull-in voltage of the piston-spring model with compliance S_m:
/// V_p = sqrt((8/27) * d^3 / (eps0 * S_m)).
Voltage pull_in_voltage(Length gap, MechSensitivity s_m, Permittivity eps0);

/// Open-circuit sensitivity bound at the pull-in limit:
/// sqrt(8 * d * S_m / (27 * eps0)), algebraically equal to S_m * V_p / d.
OpenCircuitSensitivity max_open_circuit_sensitivity(Length gap, MechSensitivity s_m,
                                                    Permittivity eps0);

/// Stable piston equilibrium x = S_m * (P + eps0*V^2 / (2*(d - x)^2)), found by
/// bisection on [0, d/3 + S_m*P] to 1e-10 relative (the d/3 bound is the
/// analytic pull-in displacement, which excludes the unstable root at P = 0).
/// Capacitance is the parallel-plate value eps0*A/(d - x) with the diaphragm
/// area. Throws PullInError when bias >= pull-in (or the pressure offset
/// reaches the backplate), NumericError when the bracket has no sign change
/// (possible only near pull-in under combined bias + pressure load).
StaticState equilibrium(const MicrophoneDesign& design, const OperatingPoint& op);

/// Pull-in voltage found numerically: bisection on V for the loss of
/// equilibrium existence, without using the closed form. Cross-checks
/// pull_in_voltage to 0.1%. Throws NumericError on bracket failure.
Voltage pull_in_numeric(const MicrophoneDesign& design);

/// Equilibrium capacitance at each pressure, in input order. Equilibrium
/// failures are rethrown as PullInError naming the offending pressure index.
std::vector<std::pair<Pressure, Capacitance>> capacitance_vs_pressure(
    const MicrophoneDesign& design, Voltage bias, std::span<const Pressure> pressures);

/// Capacitance of a parabolically deflected membrane with center deflection
/// w0: eps0*pi*a^2/w0 * ln(d/(d - w0)); series-evaluated below w0/d = 1e-6.
/// A refinement of the parallel-plate picture, never used by equilibrium().
/// Throws ValidationError for w0 < 0 or w0 >= d.
Capacitance capacitance_profile(const MicrophoneDesign& design, Length center_deflection);

}  // namespace capmic
