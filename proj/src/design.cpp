#include "capmic/design.hpp"

#include <cmath>

#include "capmic/errors.hpp"

namespace capmic {
namespace {

void check_positive(std::vector<Violation>& out, std::string path, double value,
                    std::string_view name) {
  if (!std::isfinite(value)) {
    out.push_back({std::move(path), std::string(name) + " must be finite"});
  } else if (!(value > 0.0)) {
    out.push_back({std::move(path), std::string(name) + " must be > 0"});
  }
}

}  // namespace

std::vector<Violation> validate(const MicrophoneDesign& design) {
  std::vector<Violation> out;
  const Diaphragm& dia = design.diaphragm;
  const Backplate& bp = design.backplate;

  check_positive(out, "diaphragm.diameter", dia.diameter.si(), "diameter");
  check_positive(out, "diaphragm.thickness", dia.thickness.si(), "thickness");
  check_positive(out, "diaphragm.residual_stress", dia.residual_stress.si(),
                 "residual_stress (tensile)");
  check_positive(out, "diaphragm.density", dia.density.si(), "density");

  check_positive(out, "backplate.thickness", bp.thickness.si(), "thickness");
  check_positive(out, "backplate.hole_side", bp.hole_side.si(), "hole_side");
  if (!std::isfinite(bp.hole_fraction)) {
    out.push_back({"backplate.hole_fraction", "hole_fraction must be finite"});
  } else if (!(bp.hole_fraction > 0.0 && bp.hole_fraction < 1.0)) {
    out.push_back({"backplate.hole_fraction", "hole_fraction must be in (0, 1)"});
  }
  check_positive(out, "backplate.diameter", bp.diameter.si(), "diameter");

  check_positive(out, "gap", design.gap.si(), "gap");

  check_positive(out, "environment.air_viscosity", design.environment.air_viscosity.si(),
                 "air_viscosity");
  check_positive(out, "environment.epsilon0", design.environment.vacuum_permittivity.si(),
                 "epsilon0");
  check_positive(out, "environment.air_density", design.environment.air_density.si(),
                 "air_density");

  // Derived: the perforation pattern must yield at least one hole.
  if (bp.hole_side.si() > 0.0 && bp.hole_fraction > 0.0 && bp.hole_fraction < 1.0 &&
      bp.diameter.si() > 0.0) {
    const AreaDensity n = bp.hole_fraction / square(bp.hole_side);
    const double count = std::round((n * bp.effective_area()).si());
    if (count < 1.0) {
      out.push_back({"backplate", "hole pattern yields zero holes on the plate"});
    }
  }
  return out;
}

void require_valid(const MicrophoneDesign& design) {
  const std::vector<Violation> violations = validate(design);
  if (violations.empty()) return;
  std::string msg = "invalid design:";
  for (const Violation& v : violations) {
    msg += "\n  " + v.path + ": " + v.message;
  }
  throw ValidationError(msg);
}

}  // namespace capmic
