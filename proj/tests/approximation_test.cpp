#include <gtest/gtest.h>

#include "suploc/approximation.hpp"
#include "test_util.hpp"

namespace suploc {
namespace {

using testing::R;

CadlagDensity ramp() { return CadlagDensity::ramp(1, R("1/2"), R("1/2")); }

Rational oscillation(const CadlagDensity &f, const Rational &a, const Rational &b, int samples) {
  Rational lo = f(a), hi = f(a);
  for (int i = 1; i < samples; ++i) {
    const Rational t = a + (b - a) * testing::frac(i, samples);
    lo = rmin(lo, f(t));
    hi = rmax(hi, f(t));
  }
  return hi - lo;
}

TEST(CadlagDensityTest, PresetsAreAdmissible) {
  EXPECT_TRUE(ramp().validate().admissible());
  EXPECT_EQ(ramp().integral(), R("3/4"));
  EXPECT_EQ(ramp().total_variation(), R("1/2"));
  const auto p = CadlagDensity::parabola(1, R("1/4"), 1, R("1/2"));
  EXPECT_TRUE(p.validate().admissible());
  EXPECT_EQ(p.inf(), R("1/4"));
  EXPECT_EQ(p.sup(), R("1/2"));
  EXPECT_EQ(p.total_variation(), R("1/2"));
  const auto two = CadlagDensity::two_level_ramp(1, R("1/2"), 1, R("1/4"), R("3/4"));
  EXPECT_TRUE(two.validate().admissible());
  EXPECT_EQ(two.integral(), R("3/4"));
}

TEST(CadlagDensityTest, StepRoundTrip) {
  const auto f = CadlagDensity::from_step(testing::e3_density());
  EXPECT_TRUE(f.is_step());
  EXPECT_EQ(f(R("1/4")), 1);
  EXPECT_EQ(f(R("3/4")), R("1/2"));
  EXPECT_FALSE(ramp().is_step());
}

TEST(MeshForTest, StepDensityKeepsItsBreakpoints) {
  const auto f = CadlagDensity::from_step(testing::e3_density());
  for (long n : {1, 5, 50}) EXPECT_EQ(mesh_for(f, n), (std::vector<Rational>{0, R("1/2"), 1}));
}

TEST(MeshForTest, RampCellWidth) {
  for (long n : {1, 3, 8}) {
    const auto mesh = mesh_for(ramp(), n);
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
      EXPECT_LE(mesh[i + 1] - mesh[i], Rational(2) / n);
      EXPECT_LE(ramp()(mesh[i + 1]) - ramp()(mesh[i]), Rational(1, n));
    }
  }
}

TEST(MeshForTest, ParabolaOscillationBound) {
  const auto f = CadlagDensity::parabola(1, R("1/4"), 1, R("1/2"));
  const auto mesh = mesh_for(f, 10);
  Rational narrow = 1, wide = 0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    EXPECT_LE(oscillation(f, mesh[i], mesh[i + 1], 64), R("1/10"));
    narrow = rmin(narrow, mesh[i + 1] - mesh[i]);
    wide = rmax(wide, mesh[i + 1] - mesh[i]);
  }
  EXPECT_LT(narrow, wide);
}

TEST(MeshForTest, CapIsReported) {
  try {
    mesh_for(ramp(), 1000, 16);
    FAIL() << "expected mesh_cap";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "mesh_cap");
  }
}

TEST(QuantizeTest, Constant) {
  const auto f = CadlagDensity::from_step(testing::e1_density());
  for (long n : {2, 4, 8}) {
    const auto q = quantize(f, n);
    EXPECT_EQ(q.H, Rational(q.k) * n);
    EXPECT_TRUE(same_function(q.lower, testing::e1_density()));
    EXPECT_TRUE(same_function(q.fn, StepDensity::constant(1, R("1/2") + testing::frac(1, n))));
  }
  // With k n odd, 1/2 is off the 1/(knT) grid and the floor drops below it.
  for (long n : {1, 7}) {
    const auto q = quantize(f, n);
    ASSERT_EQ(q.k, 1);
    EXPECT_TRUE(same_function(q.lower, StepDensity::constant(1, testing::frac(n / 2, n))));
  }
}

TEST(QuantizeTest, GridAlignedStep) {
  const auto q = quantize(CadlagDensity::from_step(testing::e3_density()), 2);
  EXPECT_TRUE(same_function(q.lower, testing::e3_density()));
  EXPECT_TRUE(same_function(q.fn, testing::step(1, {{R("1/2"), R("3/2")}, {1, 1}})));
}

TEST(QuantizeTest, RampSandwichAndVariation) {
  const auto q = quantize(ramp(), 4);
  EXPECT_TRUE(q.sandwich_ok);
  EXPECT_TRUE(q.tv_ok);
  for (std::size_t i = 0; i < q.lower.size(); ++i) {
    EXPECT_LE(q.lower.value(i), ramp()(q.lower.left(i)));
    EXPECT_GE(q.lower.value(i), ramp()(q.lower.right(i)) - R("1/2"));
    EXPECT_EQ(Rational(q.lower.value(i) * q.H).get_den(), 1);
  }
}

TEST(RealizeTest, RampConvergence) {
  const auto rep = realize_and_compare(ramp(), {2, 4, 8, 16});
  EXPECT_EQ(rep.d_lower, R("1/16"));
  EXPECT_EQ(rep.d_upper, 4);
  ASSERT_EQ(rep.rows.size(), 4u);
  double prev = 1;
  for (const auto &row : rep.rows) {
    EXPECT_LE(row.sup_dist, Rational(2) / row.n) << row.n;
    EXPECT_LE(row.l1_dist, 2.0 / row.n) << row.n;
    EXPECT_LT(row.l1_dist, prev);
    prev = row.l1_dist;
    EXPECT_TRUE(row.realized_equals_fn) << row.n;
    EXPECT_TRUE(row.sandwich_ok && row.tv_ok) << row.n;
    if (row.status == RealizeStatus::ok) {
      EXPECT_TRUE(row.atom_identity);
      EXPECT_TRUE(row.d_in_interval);
    }
  }
  EXPECT_EQ(rep.rows[0].status, RealizeStatus::uniform);
  EXPECT_EQ(rep.rows[3].status, RealizeStatus::ok);
  ASSERT_TRUE(rep.d_threshold.has_value());
  EXPECT_EQ(*rep.d_threshold, 4);
}

TEST(RealizeTest, StepDensityRealizesFn) {
  const auto f = CadlagDensity::from_step(testing::e3_density());
  const auto rep = realize_and_compare(f, {6, 8});
  for (const auto &row : rep.rows) {
    EXPECT_EQ(row.status, RealizeStatus::ok);
    EXPECT_TRUE(row.realized_equals_fn);
    ASSERT_TRUE(row.l1_exact.has_value());
    EXPECT_LE(*row.l1_exact, Rational(1, row.n));
  }
}

TEST(RealizeTest, SmallNCanBeInadmissible) {
  // f_1 = f + 1 has integral above 1.
  const auto rep = realize_and_compare(CadlagDensity::from_step(testing::e3_density()), {1});
  EXPECT_EQ(rep.rows[0].status, RealizeStatus::inadmissible);
}

TEST(RealizeTest, MeshCapRow) {
  const auto rep = realize_and_compare(ramp(), {64}, FillMode::repaired, 8);
  EXPECT_EQ(rep.rows[0].status, RealizeStatus::mesh_cap);
}

TEST(RealizeTest, ThreadCountDoesNotMatter) {
  const auto a = realize_and_compare(ramp(), {4, 8}, FillMode::repaired, 4096, 1);
  const auto b = realize_and_compare(ramp(), {4, 8}, FillMode::repaired, 4096, 2);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].sup_dist, b.rows[i].sup_dist);
    EXPECT_EQ(a.rows[i].l1_dist, b.rows[i].l1_dist);
    EXPECT_EQ(a.rows[i].d_n, b.rows[i].d_n);
  }
}

TEST(DistanceTest, StepVersusRamp) {
  const auto g = StepDensity::constant(1, R("3/4"));
  EXPECT_EQ(sup_distance(g, ramp()), R("1/4"));
  ASSERT_TRUE(l1_distance_exact(g, ramp()).has_value());
  EXPECT_EQ(*l1_distance_exact(g, ramp()), R("1/8"));
  EXPECT_NEAR(l1_distance(g, ramp()), 0.125, 1e-9);
}

}  // namespace
}  // namespace suploc
