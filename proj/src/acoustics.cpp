#include "capmic/acoustics.hpp"

#include <cmath>
#include <numbers>

#include "capmic/errors.hpp"
#include "capmic/statics.hpp"

namespace capmic {
namespace {

constexpr double kPi = std::numbers::pi;

// 3 dB as an exact amplitude factor of sqrt(2).
const double kCutoffDeviationDb = 10.0 * std::log10(2.0);

constexpr double kScanPointsPerDecade = 200.0;
constexpr double kScanFloorHz = 10.0;
constexpr double kScanCeilingFactor = 10.0;  // search capped at 10*f0
constexpr double kCutoffTolerance = 1e-3;

// Magnitude of the normalized response H/S_o in dB at u = f/f0.
double shape_db(double u, double zeta) {
  const double a = 1.0 - u * u;
  const double b = 2.0 * zeta * u;
  return -10.0 * std::log10(a * a + b * b);
}

}  // namespace

double skvor_bracket(double hole_fraction) {
  if (!(hole_fraction > 0.0) || hole_fraction > 1.0) {
    throw ValidationError("hole fraction must be in (0, 1]");
  }
  const double a = hole_fraction;
  return a / 2.0 - a * a / 8.0 - std::log(a) / 4.0 - 3.0 / 8.0;
}

HoleGeometry hole_geometry(const Backplate& backplate) {
  if (!(backplate.hole_side.si() > 0.0) || !(backplate.hole_fraction > 0.0) ||
      !(backplate.hole_fraction < 1.0) || !(backplate.diameter.si() > 0.0)) {
    throw ValidationError("invalid backplate perforation geometry");
  }
  const AreaDensity n = backplate.hole_fraction / square(backplate.hole_side);
  const double count = std::round((n * backplate.effective_area()).si());
  if (count < 1.0) {
    throw ValidationError("hole pattern yields zero holes on the plate");
  }
  const Length r_eq = backplate.hole_side / std::sqrt(kPi);
  return {n, count, r_eq};
}

MechResistance gap_resistance(const Backplate& backplate, Length gap, const Environment& env) {
  if (!(gap.si() > 0.0)) throw ValidationError("gap must be > 0");
  const HoleGeometry holes = hole_geometry(backplate);
  const double bracket = skvor_bracket(backplate.hole_fraction);
  return 12.0 * env.air_viscosity * backplate.effective_area() /
         (kPi * cube(gap) * holes.density) * bracket;
}

MechResistance hole_resistance(const Backplate& backplate, const Environment& env) {
  const HoleGeometry holes = hole_geometry(backplate);
  const Area r2 = square(holes.equivalent_radius);
  return 8.0 * env.air_viscosity * backplate.thickness * backplate.effective_area() /
         (holes.density * kPi * square(r2));
}

DampingBreakdown damping_breakdown(const MicrophoneDesign& design) {
  require_valid(design);
  const HoleGeometry holes = hole_geometry(design.backplate);
  const MechResistance r_a = gap_resistance(design.backplate, design.gap, design.environment);
  const MechResistance r_h = hole_resistance(design.backplate, design.environment);
  return {r_a, r_h, r_a + r_h, holes.count, holes.equivalent_radius};
}

LumpedModel lumped_model(const MicrophoneDesign& design, Voltage bias) {
  require_valid(design);
  const MechSensitivity s_m = mechanical_sensitivity(design.diaphragm);
  const Voltage v_p =
      pull_in_voltage(design.gap, s_m, design.environment.vacuum_permittivity);
  if (bias >= v_p) {
    throw PullInError("bias " + std::to_string(bias.si()) +
                      " V is at or above the pull-in voltage " + std::to_string(v_p.si()) + " V");
  }

  const Area area = design.diaphragm.area();
  const Stiffness k = area / s_m;
  const Mass m_eff = design.diaphragm.density * design.diaphragm.thickness * area / 3.0;
  const DampingBreakdown damping = damping_breakdown(design);

  const Frequency f0 = sqrt(k / m_eff) / (2.0 * kPi);
  const double zeta = (damping.total / (2.0 * sqrt(k * m_eff))).si();
  const OpenCircuitSensitivity s_o =
      open_circuit_sensitivity(s_m, electrical_sensitivity(bias, design.gap));
  return {k, m_eff, damping.total, s_o, f0, zeta};
}

FrequencyResponse frequency_response(const MicrophoneDesign& design, Voltage bias,
                                     std::span<const double> frequencies_hz) {
  const LumpedModel model = lumped_model(design, bias);
  const double dc_db = sensitivity_to_db(model.dc_sensitivity);

  FrequencyResponse response;
  response.points.reserve(frequencies_hz.size());
  double previous = 0.0;
  for (const double f : frequencies_hz) {
    if (!(f > 0.0) || f <= previous) {
      throw ValidationError("frequency grid must be strictly increasing and > 0");
    }
    previous = f;
    const double u = f / model.resonance.si();
    const double magnitude = dc_db + shape_db(u, model.damping_ratio);
    const double phase =
        -std::atan2(2.0 * model.damping_ratio * u, 1.0 - u * u) * 180.0 / kPi;
    response.points.push_back({f, magnitude, phase});
  }
  return response;
}

std::optional<Frequency> cutoff_from_model(Frequency resonance, double damping_ratio) {
  const double f0 = resonance.si();
  if (!(f0 > 0.0) || damping_ratio < 0.0) {
    throw ValidationError("resonance must be > 0 and damping ratio >= 0");
  }
  const auto drop_db = [&](double f) { return -shape_db(f / f0, damping_ratio); };

  const double f_lo = kScanFloorHz;
  const double f_hi = kScanCeilingFactor * f0;
  if (drop_db(f_lo) >= kCutoffDeviationDb) return Frequency{0.0};  // out of band at the floor
  if (f_hi <= f_lo) return std::nullopt;

  const int steps =
      static_cast<int>(std::ceil(kScanPointsPerDecade * std::log10(f_hi / f_lo)));
  const double ratio = std::pow(f_hi / f_lo, 1.0 / steps);

  double prev = f_lo;
  double crossing = -1.0;
  for (int i = 1; i <= steps; ++i) {
    const double f = (i == steps) ? f_hi : f_lo * std::pow(ratio, i);
    if (drop_db(f) >= kCutoffDeviationDb) {
      crossing = f;
      break;
    }
    prev = f;
  }
  if (crossing < 0.0) return std::nullopt;  // still flat at 10*f0

  double lo = prev;
  double hi = crossing;
  while ((hi - lo) > kCutoffTolerance * lo) {
    const double mid = std::sqrt(lo * hi);
    if (drop_db(mid) >= kCutoffDeviationDb) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return Frequency{0.5 * (lo + hi)};
}

std::optional<Frequency> cutoff_frequency(const MicrophoneDesign& design, Voltage bias) {
  const LumpedModel model = lumped_model(design, bias);
  return cutoff_from_model(model.resonance, model.damping_ratio);
}

}  // namespace capmic
