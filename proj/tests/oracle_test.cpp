#include <gtest/gtest.h>

#include <random>

#include "suploc/oracle.hpp"
#include "test_util.hpp"

namespace suploc {
namespace {

using testing::R;

void expect_law(const SupLocationLaw &law, const Rational &a0, const Rational &aT,
                const StepDensity &interior) {
  EXPECT_EQ(law.atom0, a0);
  EXPECT_EQ(law.atomT, aT);
  EXPECT_TRUE(same_function(law.interior, interior));
  EXPECT_EQ(law.total_mass(), 1);
  EXPECT_EQ(law.provenance, Provenance::envelope);
}

TEST(ExactLawTest, BaseOnly) {
  const auto law = testing::law_of(testing::e1_density());
  expect_law(law, R("1/4"), R("1/4"), testing::e1_density());
  EXPECT_EQ(law.tie_measure, 0);
}

TEST(ExactLawTest, RepairedStep) {
  const auto law = testing::law_of(testing::e3_density());
  expect_law(law, R("1/8"), R("1/8"), testing::e3_density());
  EXPECT_EQ(law.tie_measure, 0);
}

TEST(ExactLawTest, LiteralStepDiffersFromTarget) {
  const auto law = testing::law_of(testing::e3_density(), FillMode::literal);
  expect_law(law, R("1/12"), R("5/12"), StepDensity::constant(1, R("1/2")));
}

TEST(ExactLawTest, UniformPreset) {
  expect_law(exact_law(uniform_preset(1), 1), 0, 0, StepDensity::constant(1, 1));
  expect_law(exact_law(uniform_preset(3), 3), 0, 0, StepDensity::constant(3, R("1/3")));
}

TEST(ExactLawTest, RejectsLongWindow) {
  const auto path = testing::realize(testing::e1_density());
  EXPECT_THROW(exact_law(path, 2), ArgumentError);
  EXPECT_THROW(exact_law(path, 0), ArgumentError);
}

TEST(ExactLawTest, PlateauTieIsResolvedLeftmostAndReported) {
  // Flat top of length 1/2 at value 2: for shifts that see the whole plateau
  // the leftmost point of the plateau wins.
  PiecewiseLinearPath path{4, {{0, 2}, {R("1/2"), 2}, {2, -1}}, FillMode::repaired};
  const auto law = exact_law(path, 1);
  EXPECT_EQ(law.total_mass(), 1);
  EXPECT_GT(law.tie_measure, 0);
}

TEST(AtomIdentityTest, Examples) {
  auto c = peel_blocks(testing::e1_density(), 2);
  EXPECT_TRUE(atom_identity_check(testing::law_of(testing::e1_density()), c));
  c = peel_blocks(testing::e3_density(), 2);
  EXPECT_TRUE(atom_identity_check(testing::law_of(testing::e3_density()), c));
  EXPECT_FALSE(atom_identity_check(testing::law_of(testing::e3_density(), FillMode::literal), c));
}

TEST(GridLawTest, AgreesWithExactLaw) {
  for (const auto &f : {testing::e1_density(), testing::e3_density()}) {
    const auto path = testing::realize(f);
    const auto exact = exact_law(path, 1);
    const auto grid = grid_law(path, 1, 2000, 20000, 50, 2);
    EXPECT_EQ(grid.provenance, Provenance::grid);
    const auto d = law_distance(exact, grid);
    EXPECT_LT(d.atom0_diff, R("1/1000"));
    EXPECT_LT(d.atomT_diff, R("1/1000"));
    EXPECT_LT(d.interior_sup, R("1/50"));
  }
}

TEST(GridLawTest, SingleShiftIsPointMass) {
  const auto path = testing::realize(testing::e3_density());
  const auto g = grid_law(path, 1, 100, 1, 10);
  // s = 0: the window starts at the value-2 knot.
  EXPECT_EQ(g.atom0, 1);
  EXPECT_EQ(g.total_mass(), 1);
}

TEST(GridLawTest, ConvergesAsResolutionDoubles) {
  const auto path = testing::realize(testing::e3_density());
  const auto exact = exact_law(path, 1);
  auto err = [&](std::size_t n_grid, std::size_t n_shift) {
    const auto d = law_distance(exact, grid_law(path, 1, n_grid, n_shift, 20));
    return to_double(d.atom0_diff + d.atomT_diff + d.interior_L1);
  };
  const double coarse = err(50, 250);
  const double fine = err(100, 500);
  EXPECT_LE(fine, coarse / 2 + 1e-12) << coarse << " " << fine;
}

TEST(GridLawTest, ThreadCountDoesNotMatter) {
  const auto path = testing::realize(testing::e3_density());
  const auto a = grid_law(path, 1, 500, 3000, 25, 1);
  const auto b = grid_law(path, 1, 500, 3000, 25, 3);
  EXPECT_EQ(a.atom0, b.atom0);
  EXPECT_EQ(a.atomT, b.atomT);
  EXPECT_EQ(a.interior, b.interior);
}

TEST(LawDistanceTest, Examples) {
  const auto target = testing::law_of(testing::e3_density());
  auto d = law_distance(target, target);
  EXPECT_EQ(d.atom0_diff, 0);
  EXPECT_EQ(d.atomT_diff, 0);
  EXPECT_EQ(d.interior_L1, 0);

  const auto literal = testing::law_of(testing::e3_density(), FillMode::literal);
  d = law_distance(literal, target);
  EXPECT_EQ(d.interior_L1, R("1/4"));
  EXPECT_EQ(d.atom0_diff, R("1/24"));
  EXPECT_EQ(d.atomT_diff, R("7/24"));

  auto other = target;
  other.T = 2;
  EXPECT_THROW(law_distance(target, other), ArgumentError);
}

TEST(ShiftArgmaxTest, MatchesPathEvaluation) {
  const auto path = testing::realize(testing::e3_density());
  const ShiftArgmax argmax(path, 1);
  const auto r0 = argmax(0.0);
  EXPECT_EQ(r0.winner, ShiftArgmax::Winner::left);
  EXPECT_DOUBLE_EQ(r0.value, 2.0);
  // Window [1/2, 3/2] peaks at the knot 3/4.
  const auto r = argmax(0.5);
  EXPECT_EQ(r.winner, ShiftArgmax::Winner::knot);
  EXPECT_DOUBLE_EQ(r.tau, 0.25);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
}

TEST(OracleProperties, InvariantUnderPeriodChange) {
  const auto f = testing::e3_density();
  const auto a = exact_law(build_path(assign_components(peel_blocks(f, 2)), FillMode::repaired), 1);
  const auto b = exact_law(build_path(assign_components(peel_blocks(f, 4)), FillMode::repaired), 1);
  EXPECT_TRUE(same_function(a.interior, b.interior));
  EXPECT_TRUE(same_function(a.interior, f));
}

TEST(OracleProperties, InvariantUnderComponentOrderAndRotation) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 25; ++i) {
    const auto f = testing::random_admissible(rng, 12, 6);
    const auto blocks = peel_blocks(f, choose_period(f));
    auto layout = assign_components(blocks);
    const auto ref = exact_law(build_path(layout, FillMode::repaired), 1);
    std::reverse(layout.components.begin(), layout.components.end());
    const auto path = build_path(layout, FillMode::repaired);
    const auto rev = exact_law(path, 1);
    ASSERT_EQ(ref.atom0, rev.atom0);
    ASSERT_EQ(ref.atomT, rev.atomT);
    ASSERT_TRUE(same_function(ref.interior, rev.interior));

    // Re-base the period origin at an interior knot.
    const std::size_t k = path.knots.size() / 2;
    const Rational shift = path.knots[k].pos;
    PiecewiseLinearPath rotated{path.period, {}, path.mode};
    for (std::size_t j = 0; j < path.knots.size(); ++j) {
      const auto &kn = path.knots[(k + j) % path.knots.size()];
      Rational pos = kn.pos - shift;
      if (pos < 0) pos += path.period;
      rotated.knots.push_back({pos, kn.value});
    }
    const auto rot = exact_law(rotated, 1);
    ASSERT_EQ(ref.atom0, rot.atom0);
    ASSERT_EQ(ref.atomT, rot.atomT);
    ASSERT_TRUE(same_function(ref.interior, rot.interior));
  }
}

TEST(OracleProperties, LiteralAndRepairedAgreeWhenRepairUnused) {
  const auto f = testing::step(1, {{R("1/4"), R("1/2")}, {R("3/4"), 1}, {1, R("1/2")}});
  EXPECT_EQ(testing::law_of(f, FillMode::literal).interior, testing::law_of(f).interior);
}

TEST(OracleProperties, RandomPathsMatchTarget) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 40; ++i) {
    const auto f = testing::random_admissible(rng);
    const auto blocks = peel_blocks(f, choose_period(f));
    const auto law = exact_law(build_path(assign_components(blocks), FillMode::repaired), 1);
    ASSERT_EQ(law.total_mass(), 1);
    ASSERT_TRUE(same_function(law.interior, f)) << i;
    ASSERT_TRUE(atom_identity_check(law, blocks)) << i;
    ASSERT_TRUE(check_universal_bound(law.interior)) << i;
    ASSERT_EQ(law.tie_measure, 0);
  }
}

}  // namespace
}  // namespace suploc
