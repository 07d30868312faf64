#pragma once

#include <numbers>
#include <string>
#include <vector>

#include "capmic/units.hpp"

namespace capmic {

namespace defaults {
inline constexpr Viscosity air_viscosity{1.86e-5};        // Pa*s, air near 20 C
inline constexpr Permittivity vacuum_permittivity{8.854e-12};
inline constexpr Density air_density{1.2};                // kg/m^3
inline constexpr Density diaphragm_density{1420.0};       // kg/m^3, polyimide
}  // namespace defaults

/// The tensioned flexible plate. Residual stress is tensile (> 0).
struct Diaphragm {
  Length diameter;
  Length thickness;
  Pressure residual_stress;
  Density density;

  [[nodiscard]] Area area() const {
    const Length radius = diameter / 2.0;
    return std::numbers::pi * square(radius);
  }
};

/// The rigid perforated counter-electrode. Holes are squares of side
/// `hole_side` covering `hole_fraction` of the plate area.
struct Backplate {
  Length thickness;
  Length hole_side;
  double hole_fraction{};
  Length diameter;

  [[nodiscard]] Area effective_area() const {
    const Length radius = diameter / 2.0;
    return std::numbers::pi * square(radius);
  }
};

struct Environment {
  Viscosity air_viscosity = defaults::air_viscosity;
  Permittivity vacuum_permittivity = defaults::vacuum_permittivity;
  Density air_density = defaults::air_density;
};

struct MicrophoneDesign {
  Diaphragm diaphragm;
  Backplate backplate;
  Length gap;
  Environment environment;
};

struct Violation {
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Checks every invariant of the design and returns the violations in a fixed
/// field order. Empty result = valid. Pure and deterministic.
std::vector<Violation> validate(const MicrophoneDesign& design);

/// Throws ValidationError listing all violations if the design is invalid.
void require_valid(const MicrophoneDesign& design);

}  // namespace capmic
