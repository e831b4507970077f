#include <gtest/gtest.h>

#include <random>

#include "suploc/blocks.hpp"
#include "test_util.hpp"

namespace suploc {
namespace {

using testing::R;
using testing::step;

BlockCollection collection(const Rational &T, const Rational &H,
                           std::vector<std::pair<Rational, Rational>> spans) {
  BlockCollection c{T, H, {}};
  for (const auto &[u, v] : spans) c.blocks.push_back(make_block(u, v, T));
  return c;
}

TEST(MakeBlockTest, ClassifiesByEndpoints) {
  EXPECT_EQ(make_block(0, 1, 1).kind, BlockKind::base);
  EXPECT_EQ(make_block(0, R("1/2"), 1).kind, BlockKind::left);
  EXPECT_EQ(make_block(R("1/2"), 1, 1).kind, BlockKind::right);
  EXPECT_EQ(make_block(R("1/4"), R("1/2"), 1).kind, BlockKind::central);
  EXPECT_THROW(make_block(R("1/2"), R("1/2"), 1), StructuralError);
  EXPECT_THROW(make_block(0, 2, 1), StructuralError);
}

TEST(ChoosePeriodTest, Examples) {
  EXPECT_EQ(choose_period(testing::e1_density()), 2);
  EXPECT_EQ(choose_period(testing::e3_density()), 2);
  EXPECT_EQ(choose_period(StepDensity::constant(3, R("1/6"))), 2);
  EXPECT_THROW(choose_period(StepDensity::constant(1, 1)), ArgumentError);
}

TEST(ChoosePeriodTest, LevelsAreIntegers) {
  const auto f = step(1, {{R("1/3"), R("3/4")}, {1, R("1/2")}});
  const Rational H = choose_period(f);
  EXPECT_GT(H, 1);
  for (const auto &v : f.values()) EXPECT_EQ(Rational(v * H).get_den(), 1);
}

TEST(PeelBlocksTest, Examples) {
  auto c = peel_blocks(testing::e1_density(), 2);
  ASSERT_EQ(c.m(), 1u);
  EXPECT_EQ(c.blocks[0], (Block{BlockKind::base, 0, 1}));
  EXPECT_EQ(c.d(), 1);

  c = peel_blocks(testing::e3_density(), 2);
  ASSERT_EQ(c.m(), 2u);
  EXPECT_EQ(c.count(BlockKind::base), 1u);
  EXPECT_EQ(c.count(BlockKind::left), 1u);
  EXPECT_EQ(c.d(), R("1/4"));

  c = peel_blocks(step(1, {{R("1/4"), R("1/2")}, {R("3/4"), 1}, {1, R("1/2")}}), 2);
  ASSERT_EQ(c.m(), 2u);
  EXPECT_EQ(c.count(BlockKind::central), 1u);
  EXPECT_EQ(c.d(), R("1/4"));
}

TEST(PeelBlocksTest, RejectsNonIntegerLevels) {
  EXPECT_THROW(peel_blocks(testing::e3_density(), 3), ArgumentError);
}

TEST(FeasibilityTest, Examples) {
  EXPECT_TRUE(feasibility(collection(1, 2, {{0, 1}})).ok());

  auto r = feasibility(collection(1, 2, {{0, R("1/2")}}));
  EXPECT_FALSE(r.has_base);
  EXPECT_FALSE(r.ok());

  r = feasibility(collection(1, 2, {{0, 1}, {R("1/4"), R("1/2")}, {R("2/3"), R("3/4")}}));
  EXPECT_TRUE(r.has_base);
  EXPECT_FALSE(r.central_ok);
}

TEST(FeasibilityTest, OverlapAndSpacing) {
  // (1/4,1/2) and (0,1/3) neither nest nor have disjoint closures.
  auto r = feasibility(collection(1, 4, {{0, 1}, {0, 1}, {R("1/4"), R("1/2")}, {0, R("1/3")}}));
  EXPECT_FALSE(r.proper);
  // Touching closures are not disjoint.
  r = feasibility(collection(1, 4, {{0, 1}, {0, 1}, {R("1/4"), R("1/2")}, {R("1/2"), R("3/4")}}));
  EXPECT_FALSE(r.proper);
  r = feasibility(collection(1, 1, {{0, 1}}));
  EXPECT_FALSE(r.d_positive);
  r = feasibility(collection(1, 4, {{0, 1}, {0, 1}, {R("3/4"), R("7/8")}, {0, R("1/3")}, {0, R("2/3")}}));
  EXPECT_TRUE(r.ok());
}

TEST(RecomposeTest, Examples) {
  EXPECT_TRUE(same_function(recompose(collection(1, 2, {{0, 1}})), testing::e1_density()));
  EXPECT_EQ(recompose(collection(1, 2, {{0, 1}, {0, R("1/2")}})), testing::e3_density());
}

TEST(PeelBlocksTest, RoundTripOnRandomDensities) {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const auto f = testing::random_admissible(rng);
    const Rational H = choose_period(f);
    const auto c = peel_blocks(f, H);
    ASSERT_TRUE(same_function(recompose(c), f)) << i;
    ASSERT_TRUE(feasibility(c).ok()) << i;
    ASSERT_EQ(Rational(c.m()) * c.d() + c.total_length(), H * f.T()) << i;
    ASSERT_EQ(Rational(c.count(BlockKind::base)), H * f.T() * f.min_value()) << i;
    for (const auto &a : c.blocks)
      for (const auto &b : c.blocks)
        if (a.kind == BlockKind::left && b.kind == BlockKind::left) ASSERT_EQ(a.u, b.u);
  }
}

TEST(PeelBlocksTest, DifferentPeriodSameDensity) {
  const auto f = testing::e3_density();
  EXPECT_TRUE(same_function(recompose(peel_blocks(f, 2)), f));
  EXPECT_TRUE(same_function(recompose(peel_blocks(f, 4)), f));
  EXPECT_EQ(peel_blocks(f, 4).m(), 4u);
}

}  // namespace
}  // namespace suploc
