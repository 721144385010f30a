#include <gtest/gtest.h>

#include <cmath>

#include "torsionlab/radial.hpp"

using namespace torsionlab;

namespace {

RadialSpec unit_spec(int n, double G, double S) {
  RadialSpec s;
  s.n = n;
  s.G = G;
  s.S = S;
  return s;
}

}  // namespace

TEST(AnnulusProfile, PlanarUnitWeight) {
  auto V = annulus_profile(unit_spec(2, pi, pi / 4));
  EXPECT_NEAR(V(0), 0.1875, 1e-15);
  EXPECT_NEAR(V(pi / 8), 0.1875, 1e-15);  // flat across the hole
  EXPECT_NEAR(V(pi / 2), (pi - pi / 2) / (4 * pi), 1e-15);
  EXPECT_EQ(V(pi), 0.0);
  EXPECT_TRUE(V.tabulate(64).nonincreasing());
}

TEST(AnnulusProfile, TabulatedWeightMatchesUnit) {
  auto spec = unit_spec(3, 4.0, 1.0);
  auto unit = annulus_profile(spec);
  spec.nu.push_back({{0.0, 1.5, 3.0}, {1.0, 1.0, 1.0}});
  auto tab = annulus_profile(spec);
  for (double s : {0.0, 0.5, 1.0, 2.0, 3.5, 4.0}) EXPECT_NEAR(tab(s), unit(s), 1e-12);
  EXPECT_NEAR(annulus_torsion_exact(spec), annulus_torsion_exact(4.0, 1.0, 3), 1e-12);
}

TEST(AnnulusProfile, RejectsBadSpec) {
  EXPECT_THROW(annulus_profile(unit_spec(1, 1, 0)), Error);
  EXPECT_THROW(annulus_profile(unit_spec(2, 1, 1)), Error);
  auto spec = unit_spec(2, 2, 0.5);
  spec.nu.push_back({{0.0, 1.0}, {1.0, 2.0}});  // increasing weight
  EXPECT_THROW(annulus_profile(spec), Error);
}

TEST(AnnulusTorsionExact, PlanarOracles) {
  EXPECT_NEAR(annulus_torsion_exact(pi, 0), pi / 8, 1e-15);
  EXPECT_NEAR(annulus_torsion_exact(pi, pi / 4), 15 * pi / 128, 1e-15);
  EXPECT_NEAR(annulus_torsion_exact(pi, pi * (1 - 1e-9)), 0.0, 1e-9);
}

TEST(AnnulusTorsionExact, IsIntegralOfProfile) {
  for (int n : {2, 3, 4}) {
    auto spec = unit_spec(n, 5.0, 1.5);
    auto V = annulus_profile(spec);
    double integral = 1.5 * V(0) + boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                                       [&](double s) { return V(s); }, 1.5, 5.0, 15, 1e-14);
    EXPECT_NEAR(annulus_torsion_exact(spec), integral, 1e-12) << "n=" << n;
  }
}

TEST(ZetaInverse, OneHole) {
  auto spec = unit_spec(2, 10.0, 2.0);
  spec.holes = {{3.0, 2.0}};
  auto z = zeta_inverse(spec);
  EXPECT_EQ(z(1.0), 1.0);
  EXPECT_EQ(z(4.0), 0.0);
  EXPECT_EQ(z(6.0), 1.0);
  EXPECT_EQ(z(9.9), 1.0);
  auto b = z.breakpoints();
  EXPECT_NE(std::find(b.begin(), b.end(), 3.0), b.end());
  EXPECT_NE(std::find(b.begin(), b.end(), 5.0), b.end());
}

TEST(ZetaInverse, NoHolesIsWeight) {
  auto spec = unit_spec(2, 3.0, 0.0);
  spec.nu.push_back({{0.0, 3.0}, {2.0, 1.0}});
  auto z = zeta_inverse(spec);
  for (double r : {0.0, 1.0, 2.5}) EXPECT_NEAR(z(r), 1.0 / spec.nu[0](r), 1e-15);
}

TEST(ZetaInverse, TwoHolesAndErrors) {
  auto spec = unit_spec(2, 10.0, 3.0);
  spec.holes = {{5.0, 1.0}, {2.0, 2.0}};  // μ(c_2) <= μ(c_1)
  auto z = zeta_inverse(spec);
  EXPECT_EQ(z(1.0), 1.0);
  EXPECT_EQ(z(3.0), 0.0);   // hole 2 on (2, 4)
  EXPECT_EQ(z(4.5), 1.0);
  EXPECT_EQ(z(6.5), 1.0);
  EXPECT_EQ(z(7.5), 0.0);   // hole 1 on (7, 8)
  EXPECT_EQ(z(9.0), 1.0);

  spec.holes = {{2.0, 1.0}, {5.0, 2.0}};
  EXPECT_THROW(zeta_inverse(spec), Error);
  spec.holes = {{5.0, 1.0}, {2.0, 1.0}};  // measures do not add up to |S|
  EXPECT_THROW(zeta_inverse(spec), Error);
}

TEST(PointwiseBoundW, PiecewiseLinearInPlane) {
  auto spec = unit_spec(2, 10.0, 2.0);
  spec.holes = {{3.0, 2.0}};
  auto w = pointwise_bound_w(spec, zeta_inverse(spec));
  const double c = 1 / (4 * pi);
  EXPECT_NEAR(w(0), c * 8, 1e-14);
  EXPECT_NEAR(w(2), c * 6, 1e-14);
  EXPECT_NEAR(w(4), c * 5, 1e-14);  // flat across the hole interval
  EXPECT_NEAR(w(7), c * 3, 1e-14);
  EXPECT_EQ(w(10), 0.0);
  // w never exceeds the symmetrised profile
  auto V = annulus_profile(spec);
  for (double s = 0; s <= 10; s += 0.25) EXPECT_LE(w(s), V(s) + 1e-14);
}

TEST(Counterexample, ThreeDimensionalGap) {
  auto ce = counterexample_profile(3, 10, 1, 2);
  EXPECT_NEAR(ce.gap, -0.026463734234566, 1e-12);
  EXPECT_NEAR(ce.V(0) - ce.u(0), ce.gap, 1e-14);
  bool violated = false;
  for (int i = 0; i <= 200; ++i) {
    double s = 10.0 * i / 200;
    if (ce.u(s) > ce.V(s) + 1e-12) violated = true;
  }
  EXPECT_TRUE(violated);
  EXPECT_LT(concentration_difference(ce.V, ce.u, 0.2), 0.0);
}

TEST(Counterexample, PlanarGapVanishes) {
  for (auto [Br, BR] : {std::pair{1.0, 2.0}, std::pair{0.3, 4.0}}) {
    auto ce = counterexample_profile(2, 10, Br, BR);
    EXPECT_EQ(ce.gap, 0.0);
    for (int i = 0; i <= 200; ++i) {
      double s = 10.0 * i / 200;
      EXPECT_LE(ce.u(s), ce.V(s) + 1e-14);
    }
  }
}

TEST(Counterexample, Errors) {
  EXPECT_THROW(counterexample_profile(1, 10, 1, 2), Error);
  try {
    counterexample_profile(3, 10, 3, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_nesting);
  }
}
