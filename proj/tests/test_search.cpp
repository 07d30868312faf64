#include "capmic/search.hpp"

#include <cmath>
#include <optional>
#include <vector>

#include <doctest.h>

#include "capmic/acoustics.hpp"
#include "capmic/errors.hpp"
#include "capmic/search_io.hpp"
#include "capmic/statics.hpp"
#include "test_support.hpp"

using namespace capmic;
using namespace capmic::literals;

namespace {

// Independent enumerate-filter-argmax oracle. Deliberately straightforward:
// materialize every grid point, filter by feasible(), pick the maximum with
// explicit lexicographic tie-breaking.
struct OracleResult {
  ParameterVector params{};
  double objective{};
  std::int64_t feasible_count{};
  std::int64_t evaluated_count{};
};

std::optional<OracleResult> oracle_grid_search(const DesignSpace& space,
                                               const Constraints& constraints) {
  std::vector<ParameterVector> points;
  const auto axis = [](const AxisSpec& a) {
    std::vector<double> v;
    if (a.count == 1) return std::vector<double>{a.lower};
    for (int i = 0; i < a.count; ++i) {
      v.push_back(a.lower + (a.upper - a.lower) * double(i) / double(a.count - 1));
    }
    return v;
  };
  for (double d : axis(space.diameter))
    for (double t : axis(space.thickness))
      for (double s : axis(space.stress))
        for (double g : axis(space.gap))
          for (double hf : axis(space.hole_fraction))
            for (double hs : axis(space.hole_side)) points.push_back({d, t, s, g, hf, hs});

  OracleResult result;
  result.evaluated_count = static_cast<std::int64_t>(points.size());
  bool found = false;
  for (const ParameterVector& p : points) {
    const MicrophoneDesign design = design_at(space, p);
    if (!feasible(design, constraints).ok) continue;
    ++result.feasible_count;
    const double objective =
        open_circuit_sensitivity(mechanical_sensitivity(design.diaphragm),
                                 electrical_sensitivity(constraints.bias, design.gap))
            .si();
    if (!found || objective > result.objective ||
        (objective == result.objective && p < result.params)) {
      result.params = p;
      result.objective = objective;
      found = true;
    }
  }
  if (!found) return std::nullopt;
  return result;
}

DesignSpace degenerate_space(const MicrophoneDesign& d) {
  DesignSpace space;
  space.base = d;
  space.diameter = {d.diaphragm.diameter.si(), d.diaphragm.diameter.si(), 1};
  space.thickness = {d.diaphragm.thickness.si(), d.diaphragm.thickness.si(), 1};
  space.stress = {d.diaphragm.residual_stress.si(), d.diaphragm.residual_stress.si(), 1};
  space.gap = {d.gap.si(), d.gap.si(), 1};
  space.hole_fraction = {d.backplate.hole_fraction, d.backplate.hole_fraction, 1};
  space.hole_side = {d.backplate.hole_side.si(), d.backplate.hole_side.si(), 1};
  return space;
}

void check_matches_oracle(const DesignSpace& space, const Constraints& constraints) {
  const auto expected = oracle_grid_search(space, constraints);
  if (!expected) {
    CHECK_THROWS_AS(grid_search(space, constraints), InfeasibleError);
    return;
  }
  const SearchResult actual = grid_search(space, constraints);
  CHECK(actual.best_params == expected->params);  // bitwise, including ties
  CHECK(actual.best_objective_v_per_pa == expected->objective);
  CHECK(actual.feasible_count == expected->feasible_count);
  CHECK(actual.evaluated_count == expected->evaluated_count);
}

}  // namespace

TEST_CASE("feasibility of the reference design") {
  const MicrophoneDesign d = test::reference_design();
  const Constraints defaults;

  // 12 V < 0.6 * 44.4 V = 26.6 V, cutoff 62 kHz > 20 kHz, C0 2.51 pF > 1 pF.
  CHECK(feasible(d, defaults).ok);

  Constraints hot = defaults;
  hot.bias = {30.0};
  const Feasibility over_bias = feasible(d, hot);
  CHECK_FALSE(over_bias.ok);
  REQUIRE(over_bias.reasons.size() == 1);
  CHECK(over_bias.reasons[0].find("bias margin") == 0);

  Constraints big_cap = defaults;
  big_cap.min_capacitance = {10e-12};
  const Feasibility small = feasible(d, big_cap);
  CHECK_FALSE(small.ok);
  REQUIRE(small.reasons.size() == 1);
  CHECK(small.reasons[0].find("capacitance") == 0);

  Constraints fast = defaults;
  fast.min_cutoff = {10e6};
  const Feasibility slow = feasible(d, fast);
  CHECK_FALSE(slow.ok);
  REQUIRE(slow.reasons.size() == 1);
  CHECK(slow.reasons[0].find("cutoff") == 0);
}

TEST_CASE("grid search on the degenerate reference space") {
  const MicrophoneDesign d = test::reference_design();
  const SearchResult result = grid_search(degenerate_space(d), Constraints{});
  CHECK(result.evaluated_count == 1);
  CHECK(result.feasible_count == 1);
  CHECK(result.best_design.diaphragm.diameter.si() == d.diaphragm.diameter.si());
  CHECK(result.best_objective_v_per_pa == doctest::Approx(2.04e-2).epsilon(1e-4));
  CHECK(result.report.bias_v == 12.0);
}

TEST_CASE("grid search picks the best feasible gap") {
  // gap in {5, 10, 20} um, everything else fixed: 5 um violates the bias
  // margin (V_p = 15.7 V), so the best feasible gap is 10 um.
  DesignSpace space = degenerate_space(test::reference_design());
  SUBCASE("three gaps") {
    space.gap = {5e-6, 20e-6, 3};  // 5, 12.5, 20 um -- midpoint 12.5
    const SearchResult result = grid_search(space, Constraints{});
    CHECK(result.best_design.gap.si() == doctest::Approx(12.5e-6).epsilon(1e-12));
    check_matches_oracle(space, Constraints{});
  }
  SUBCASE("explicit 5/10/20 grid via refinement of the axis") {
    // 5, 10, 20 um are not equally spaced; use three degenerate sub-searches
    // against the oracle instead.
    for (double gap : {5e-6, 10e-6, 20e-6}) {
      DesignSpace sub = degenerate_space(test::reference_design());
      sub.gap = {gap, gap, 1};
      if (gap == 5e-6) {
        CHECK_THROWS_AS(grid_search(sub, Constraints{}), InfeasibleError);
      } else {
        check_matches_oracle(sub, Constraints{});
      }
    }
    // Across the feasible gaps the smaller one wins (S_e = V/d).
    DesignSpace pair = degenerate_space(test::reference_design());
    pair.gap = {10e-6, 20e-6, 2};
    const SearchResult result = grid_search(pair, Constraints{});
    CHECK(result.best_design.gap.si() == 10e-6);
  }
}

TEST_CASE("grid search equals the oracle on mixed spaces") {
  const MicrophoneDesign base = test::reference_design();
  Constraints constraints;

  DesignSpace space = degenerate_space(base);
  space.diameter = {1.0e-3, 3.0e-3, 5};
  space.thickness = {0.4e-6, 1.2e-6, 4};
  space.stress = {5e6, 20e6, 5};
  space.gap = {4e-6, 20e-6, 5};
  check_matches_oracle(space, constraints);

  space = degenerate_space(base);
  space.hole_fraction = {0.05, 0.45, 9};
  space.hole_side = {40e-6, 120e-6, 5};
  space.gap = {6e-6, 14e-6, 3};
  check_matches_oracle(space, constraints);

  // Ties: S_o does not depend on hole_side, so both columns tie and the
  // lexicographically smaller hole_side must win.
  space = degenerate_space(base);
  space.hole_side = {80e-6, 100e-6, 2};
  const SearchResult tie = grid_search(space, constraints);
  CHECK(tie.best_design.backplate.hole_side.si() == 80e-6);
  check_matches_oracle(space, constraints);

  // Tighter constraints change the winner, not the agreement.
  constraints.min_cutoff = {60e3};
  constraints.max_bias_fraction_of_pullin = 0.3;
  space = degenerate_space(base);
  space.stress = {5e6, 30e6, 4};
  space.gap = {4e-6, 20e-6, 4};
  space.hole_fraction = {0.1, 0.4, 4};
  check_matches_oracle(space, constraints);
}

TEST_CASE("grid search error taxonomy") {
  const MicrophoneDesign base = test::reference_design();

  DesignSpace impossible = degenerate_space(base);
  Constraints constraints;
  constraints.min_cutoff = {10e6};
  CHECK_THROWS_AS(grid_search(impossible, constraints), InfeasibleError);

  DesignSpace empty = degenerate_space(base);
  empty.gap.count = 0;
  CHECK_THROWS_AS(grid_search(empty, Constraints{}), ValidationError);

  DesignSpace inverted = degenerate_space(base);
  inverted.stress = {2e7, 1e7, 3};
  CHECK_THROWS_AS(grid_search(inverted, Constraints{}), ValidationError);

  DesignSpace invalid_points = degenerate_space(base);
  invalid_points.hole_fraction = {0.5, 1.5, 3};  // grid reaches an invalid design
  CHECK_THROWS_AS(grid_search(invalid_points, Constraints{}), ValidationError);
}

TEST_CASE("search output is deterministic") {
  DesignSpace space = degenerate_space(test::reference_design());
  space.gap = {6e-6, 14e-6, 5};
  space.stress = {8e6, 14e6, 3};
  const std::string first = search_result_to_json(grid_search(space, Constraints{})).dump(2);
  const std::string second = search_result_to_json(grid_search(space, Constraints{})).dump(2);
  CHECK(first == second);
}

TEST_CASE("enlarging the space never yields a worse best objective") {
  DesignSpace small = degenerate_space(test::reference_design());
  small.gap = {8e-6, 12e-6, 3};
  DesignSpace big = small;
  big.gap = {8e-6, 12e-6, 5};      // superset grid: 8,9,10,11,12 vs 8,10,12
  big.thickness = {0.4e-6, 0.6e-6, 2};  // extra axis values including the base

  const double small_best = grid_search(small, Constraints{}).best_objective_v_per_pa;
  const double big_best = grid_search(big, Constraints{}).best_objective_v_per_pa;
  CHECK(big_best >= small_best);
}

TEST_CASE("refine") {
  const MicrophoneDesign d = test::reference_design();
  DesignSpace space = degenerate_space(d);
  space.gap = {2e-6, 20e-6, 5};
  space.stress = {6e6, 30e6, 5};
  const Constraints constraints;

  const SearchResult coarse = grid_search(space, constraints);

  SUBCASE("rounds = 0 returns the incumbent unchanged") {
    const SearchResult same = refine(space, constraints, coarse.best_design, 0);
    CHECK(same.best_objective_v_per_pa == coarse.best_objective_v_per_pa);
    CHECK(same.evaluated_count == 0);
    CHECK(same.best_design.gap.si() == coarse.best_design.gap.si());
  }

  SUBCASE("objective is non-decreasing across rounds") {
    double previous = coarse.best_objective_v_per_pa;
    for (int rounds = 1; rounds <= 4; ++rounds) {
      const SearchResult refined = refine(space, constraints, coarse.best_design, rounds);
      CHECK(refined.best_objective_v_per_pa >= previous);
      previous = refined.best_objective_v_per_pa;
      CHECK(feasible(refined.best_design, constraints).ok);
    }
  }

  SUBCASE("refining around the reference design does not lose it") {
    DesignSpace wide = degenerate_space(d);
    wide.gap = {5e-6, 20e-6, 4};
    wide.stress = {8e6, 16e6, 4};
    const SearchResult start = grid_search(wide, constraints);
    const SearchResult refined = refine(wide, constraints, start.best_design, 3);
    const double reference_objective =
        (mechanical_sensitivity(d.diaphragm) *
         electrical_sensitivity(constraints.bias, d.gap))
            .si();
    CHECK(refined.best_objective_v_per_pa >= reference_objective * 0.999);
  }

  SUBCASE("infeasible incumbent is rejected") {
    MicrophoneDesign bad = d;
    bad.gap = {2e-6};  // V_p = 3.97 V < 12 V bias: fails the margin
    CHECK_THROWS_AS(refine(space, constraints, bad, 2), ValidationError);
    CHECK_THROWS_AS(refine(space, constraints, d, -1), ValidationError);
  }
}
