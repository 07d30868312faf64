#include "capmic/acoustics.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "capmic/errors.hpp"
#include "capmic/statics.hpp"
#include "test_support.hpp"

using namespace capmic;
using namespace capmic::literals;

TEST_CASE("perforation bracket") {
  // Exactly zero at full perforation: 1/2 - 1/8 - 0 - 3/8.
  CHECK(skvor_bracket(1.0) == 0.0);
  CHECK(skvor_bracket(0.24) == doctest::Approx(0.09457908891003647).epsilon(1e-12));

  // Strictly decreasing on (0, 1], unbounded toward zero.
  CHECK(skvor_bracket(1e-9) > 4.5);
  CHECK(skvor_bracket(1e-15) > skvor_bracket(1e-9));
  double previous = skvor_bracket(1e-9);
  for (int i = 1; i <= 1000; ++i) {
    const double a = 0.01 + (1.0 - 0.01) * i / 1000.0;
    const double value = skvor_bracket(a);
    CHECK(value < previous);
    previous = value;
  }

  CHECK_THROWS_AS(skvor_bracket(0.0), ValidationError);
  CHECK_THROWS_AS(skvor_bracket(-0.1), ValidationError);
  CHECK_THROWS_AS(skvor_bracket(1.2), ValidationError);
}

TEST_CASE("hole geometry") {
  const Backplate bp = test::reference_design().backplate;
  const HoleGeometry holes = hole_geometry(bp);
  CHECK(holes.density.si() == doctest::Approx(3.75e7).epsilon(1e-12));
  CHECK(holes.count == 106.0);
  CHECK(holes.equivalent_radius.si() == doctest::Approx(45.1352e-6).epsilon(1e-5));

  Backplate denser = bp;
  denser.hole_fraction = 0.48;
  CHECK(hole_geometry(denser).density.si() == doctest::Approx(2.0 * 3.75e7).epsilon(1e-12));

  Backplate big = bp;
  big.hole_side = {100e-6};
  CHECK(hole_geometry(big).equivalent_radius.si() ==
        doctest::Approx(5.641895835477564e-5).epsilon(1e-12));
}

TEST_CASE("gap resistance") {
  const MicrophoneDesign d = test::reference_design();
  CHECK(gap_resistance(d.backplate, d.gap, d.environment).si() ==
        doctest::Approx(5.080486003162647e-4).epsilon(1e-9));

  // Full perforation has no squeeze-film term. hole_fraction = 1 is outside
  // the design invariant but the formula itself is defined there.
  Backplate open = d.backplate;
  open.hole_fraction = 1.0 - 1e-12;
  CHECK(gap_resistance(open, d.gap, d.environment).si() ==
        doctest::Approx(0.0).epsilon(1e-9));

  // Doubling the gap divides R_a by 8.
  const double base = gap_resistance(d.backplate, d.gap, d.environment).si();
  CHECK(gap_resistance(d.backplate, 2.0 * d.gap, d.environment).si() ==
        doctest::Approx(base / 8.0).epsilon(1e-12));
}

TEST_CASE("hole resistance") {
  const MicrophoneDesign d = test::reference_design();
  CHECK(hole_resistance(d.backplate, d.environment).si() ==
        doctest::Approx(8.62896428535867e-5).epsilon(1e-9));

  Backplate thick = d.backplate;
  thick.thickness = 2.0 * d.backplate.thickness;
  CHECK(hole_resistance(thick, d.environment).si() ==
        doctest::Approx(2.0 * 8.62896428535867e-5).epsilon(1e-12));

  // Splitting holes: halving the side at fixed fraction quadruples n and
  // divides r^4 by 16, so R_h scales by 4.
  Backplate split = d.backplate;
  split.hole_side = {40e-6};
  CHECK(hole_resistance(split, d.environment).si() ==
        doctest::Approx(4.0 * 8.62896428535867e-5).epsilon(1e-12));
}

TEST_CASE("total damping decreases with hole fraction") {
  const MicrophoneDesign base = test::reference_design();
  double previous = 1e300;
  for (int i = 0; i <= 10; ++i) {
    MicrophoneDesign d = base;
    d.backplate.hole_fraction = 0.05 + 0.04 * i;
    const DampingBreakdown damping = damping_breakdown(d);
    CHECK(damping.total.si() == damping.gap_resistance.si() + damping.hole_resistance.si());
    CHECK(damping.total.si() < previous);
    previous = damping.total.si();
  }
}

TEST_CASE("lumped model anchors") {
  const MicrophoneDesign d = test::reference_design();
  const LumpedModel m = lumped_model(d, 12.0_V);
  CHECK(m.stiffness.si() == doctest::Approx(166.78).epsilon(0.001));
  CHECK(m.effective_mass.si() == doctest::Approx(8.052216130415998e-10).epsilon(1e-9));
  CHECK(m.damping.si() == doctest::Approx(5.943382431698514e-4).epsilon(1e-9));
  CHECK(m.resonance.si() == doctest::Approx(72433.0).epsilon(0.001));
  CHECK(m.damping_ratio == doctest::Approx(0.81091).epsilon(0.001));
  CHECK(m.dc_sensitivity.si() == doctest::Approx(2.04e-2).epsilon(1e-4));

  // Resonance and damping ratio do not depend on bias.
  const LumpedModel low = lumped_model(d, 1.0_V);
  CHECK(low.resonance.si() == m.resonance.si());
  CHECK(low.damping_ratio == m.damping_ratio);

  CHECK_THROWS_AS(lumped_model(d, Voltage{50.0}), PullInError);
}

TEST_CASE("lumped model fields satisfy the defining relations") {
  for (const MicrophoneDesign& d : test::design_corpus(30, 99)) {
    const LumpedModel m = lumped_model(d, 0.0_V);
    const double f0 = std::sqrt(m.stiffness.si() / m.effective_mass.si()) /
                      (2.0 * std::numbers::pi);
    const double zeta =
        m.damping.si() / (2.0 * std::sqrt(m.stiffness.si() * m.effective_mass.si()));
    CHECK(m.resonance.si() == doctest::Approx(f0).epsilon(1e-12));
    CHECK(m.damping_ratio == doctest::Approx(zeta).epsilon(1e-12));
    CHECK(m.damping_ratio > 0.0);  // valid perforated backplates always damp
  }
}

TEST_CASE("frequency response") {
  const MicrophoneDesign d = test::reference_design();
  const LumpedModel m = lumped_model(d, 12.0_V);
  const double dc_db = sensitivity_to_db(m.dc_sensitivity);

  SUBCASE("DC limit") {
    const std::vector<double> grid{m.resonance.si() / 1000.0};
    const FrequencyResponse r = frequency_response(d, 12.0_V, grid);
    CHECK(r.points[0].magnitude_db == doctest::Approx(dc_db).epsilon(1e-5));
    CHECK(std::abs(r.points[0].magnitude_db - dc_db) < 0.01);
  }

  SUBCASE("|H(f0)| = S_o/(2*zeta)") {
    const std::vector<double> grid{m.resonance.si()};
    const FrequencyResponse r = frequency_response(d, 12.0_V, grid);
    const double expected = dc_db - 20.0 * std::log10(2.0 * m.damping_ratio);
    CHECK(r.points[0].magnitude_db == doctest::Approx(expected).epsilon(1e-10));
    CHECK(r.points[0].phase_deg == doctest::Approx(-90.0).epsilon(1e-10));
  }

  SUBCASE("doubling the bias lifts every point by 6.0206 dB") {
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(20.0 * std::pow(10.0, i / 50.0 * 0.925));
    const FrequencyResponse at12 = frequency_response(d, 12.0_V, grid);
    const FrequencyResponse at24 = frequency_response(d, 24.0_V, grid);
    const double shift = 20.0 * std::log10(2.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(at24.points[i].magnitude_db - at12.points[i].magnitude_db ==
            doctest::Approx(shift).epsilon(1e-9));
      // The normalized shape, and with it the phase, is bias-independent.
      CHECK(at24.points[i].phase_deg == at12.points[i].phase_deg);
    }
  }

  SUBCASE("phase stays in (-180, 0] and magnitude is continuous") {
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(10.0 * std::pow(10.0, i / 80.0));
    const FrequencyResponse r = frequency_response(d, 12.0_V, grid);
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      CHECK(r.points[i].phase_deg > -180.0);
      CHECK(r.points[i].phase_deg <= 0.0);
      CHECK(std::isfinite(r.points[i].magnitude_db));
      if (i > 0) {
        CHECK(std::abs(r.points[i].magnitude_db - r.points[i - 1].magnitude_db) < 1.5);
      }
    }
  }

  SUBCASE("overdamped response is monotone non-increasing") {
    MicrophoneDesign heavy = d;
    heavy.backplate.hole_fraction = 0.05;  // zeta ~ 14.6
    std::vector<double> grid;
    for (int i = 0; i <= 300; ++i) grid.push_back(10.0 * std::pow(10.0, i / 60.0));
    const FrequencyResponse r = frequency_response(heavy, 12.0_V, grid);
    for (std::size_t i = 1; i < r.points.size(); ++i) {
      CHECK(r.points[i].magnitude_db <= r.points[i - 1].magnitude_db);
    }
  }

  SUBCASE("bad grids are rejected") {
    CHECK_THROWS_AS(frequency_response(d, 12.0_V, std::vector<double>{100.0, 100.0}),
                    ValidationError);
    CHECK_THROWS_AS(frequency_response(d, 12.0_V, std::vector<double>{0.0, 100.0}),
                    ValidationError);
    CHECK_THROWS_AS(frequency_response(d, 12.0_V, std::vector<double>{200.0, 100.0}),
                    ValidationError);
  }
}

TEST_CASE("cutoff frequency") {
  const MicrophoneDesign d = test::reference_design();

  SUBCASE("Butterworth condition: zeta = 1/sqrt(2) puts the cutoff at f0") {
    const auto cutoff = cutoff_from_model(Frequency{50e3}, 1.0 / std::sqrt(2.0));
    REQUIRE(cutoff.has_value());
    CHECK(cutoff->si() == doctest::Approx(50e3).epsilon(0.005));
  }

  SUBCASE("scan+bisect agrees with the analytic -3 dB bandwidth") {
    for (double zeta : {0.05, 0.3, 0.7071, 1.0, 2.0, 8.0}) {
      const double f0 = 72433.0;
      const auto cutoff = cutoff_from_model(Frequency{f0}, zeta);
      REQUIRE(cutoff.has_value());
      const double b = 1.0 - 2.0 * zeta * zeta;
      const double analytic = f0 * std::sqrt(b + std::sqrt(b * b + 1.0));
      CHECK(cutoff->si() == doctest::Approx(analytic).epsilon(0.002));
    }
  }

  SUBCASE("reference design is flat past 20 kHz") {
    const auto cutoff = cutoff_frequency(d, 12.0_V);
    REQUIRE(cutoff.has_value());
    CHECK(cutoff->si() > 20e3);
    CHECK(cutoff->si() == doctest::Approx(62028.0).epsilon(0.005));
  }

  SUBCASE("cutoff is non-decreasing in hole fraction over the design family") {
    double previous = 0.0;
    for (int i = 0; i <= 10; ++i) {
      MicrophoneDesign swept = d;
      swept.backplate.hole_fraction = 0.05 + 0.04 * i;
      const auto cutoff = cutoff_frequency(swept, 12.0_V);
      REQUIRE(cutoff.has_value());
      CHECK(cutoff->si() >= previous);
      previous = cutoff->si();
    }
  }

  SUBCASE("a response already out of band at the scan floor reports 0 Hz") {
    const auto cutoff = cutoff_from_model(Frequency{50e3}, 1e5);  // absurdly overdamped
    REQUIRE(cutoff.has_value());
    CHECK(cutoff->si() == 0.0);
  }
}
