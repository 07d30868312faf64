#pragma once

#include <optional>
#include <span>
#include <vector>

#include "capmic/design.hpp"

namespace capmic {

struct HoleGeometry {
  AreaDensity density;        // holes per unit plate area
  double count{};             // holes on the plate, rounded
  Length equivalent_radius;   // equal-area circular radius of the square hole
};

struct DampingBreakdown {
  MechResistance gap_resistance;
  MechResistance hole_resistance;
  MechResistance total;
  double hole_count{};
  Length equivalent_hole_radius;
};

/// Single-degree-of-freedom mass-spring-damper with the DC gain anchored to
/// S_o = S_m * S_e. Stiffness k = A/S_m, parabolic-mode effective mass
/// m_eff = rho*h*A/3, damping c = R_a + R_h. Dynamics carry no electrostatic
/// spring softening, so f0 and zeta are bias-independent.
struct LumpedModel {
  Stiffness stiffness;
  Mass effective_mass;
  MechResistance damping;
  OpenCircuitSensitivity dc_sensitivity;
  Frequency resonance;
  double damping_ratio{};
};

struct FrequencyPoint {
  double frequency_hz{};
  double magnitude_db{};  // dB re 1 V/Pa
  double phase_deg{};
};

struct FrequencyResponse {
  std::vector<FrequencyPoint> points;
};

/// Perforation factor A/2 - A^2/8 - ln(A)/4 - 3/8 of the gap resistance.
/// Zero at full perforation (A = 1), grows without bound as A -> 0.
/// Throws ValidationError for A <= 0 or A > 1.
double skvor_bracket(double hole_fraction);

HoleGeometry hole_geometry(const Backplate& backplate);

/// Squeeze-film resistance of the air gap:
/// R_a = 12*nu*A_eff / (pi*d^3*n) * skvor_bracket(A), in N*s/m.
MechResistance gap_resistance(const Backplate& backplate, Length gap, const Environment& env);

/// Poiseuille resistance of the perforations:
/// R_h = 8*nu*t*A_eff / (n*pi*r^4) with r the equal-area hole radius.
MechResistance hole_resistance(const Backplate& backplate, const Environment& env);

DampingBreakdown damping_breakdown(const MicrophoneDesign& design);

/// Throws PullInError when bias >= pull-in.
LumpedModel lumped_model(const MicrophoneDesign& design, Voltage bias);

/// H(f) = S_o / (1 - (f/f0)^2 + j*2*zeta*(f/f0)); magnitude in dB re 1 V/Pa,
/// phase in degrees. The grid must be strictly increasing and positive.
FrequencyResponse frequency_response(const MicrophoneDesign& design, Voltage bias,
                                     std::span<const double> frequencies_hz);

/// Smallest f where the magnitude falls 3 dB (a factor sqrt(2)) below the DC
/// value: geometric scan at 200 points/decade over [10 Hz, 10*f0], then
/// bisection to 0.1%. Returns nullopt when the response is still flat at
/// 10*f0 ("flat beyond range"), and 0 Hz when it is already out of band at
/// the 10 Hz scan floor.
std::optional<Frequency> cutoff_from_model(Frequency resonance, double damping_ratio);
std::optional<Frequency> cutoff_frequency(const MicrophoneDesign& design, Voltage bias);

}  // namespace capmic
