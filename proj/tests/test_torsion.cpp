#include <gtest/gtest.h>

#include <cmath>

#include "torsionlab/torsion.hpp"

using namespace torsionlab;

namespace {

Domain disk() { return validate_domain(Polygon::regular(256, 1.0), {}); }

std::shared_ptr<const Mesh> mesh_of(const Domain& d, double h) {
  return std::make_shared<const Mesh>(triangulate(d, h));
}

double max_nodal(const TorsionSolution& s) { return *std::max_element(s.nodal_u.begin(), s.nodal_u.end()); }

}  // namespace

TEST(Assemble, SimplyConnectedLoadIsArea) {
  auto d = validate_domain(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), {});
  auto m = mesh_of(d, 0.1);
  auto sys = assemble(m, d);
  EXPECT_TRUE(sys.master.empty());
  // Boundary hats are eliminated; the full lumped sum still adds to |G|.
  double full = 0;
  for (auto& t : m->triangles) full += m->triangle_area(t);
  EXPECT_NEAR(full, 1.0, 1e-12);
  EXPECT_GT(sys.load.sum(), 0.0);
  EXPECT_LT(sys.load.sum(), 1.0);
  EXPECT_EQ(sys.ndof(), sys.free_count);
}

TEST(Assemble, MastersCarryHoleMeasure) {
  auto one = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  auto sys = assemble(mesh_of(one, 0.05), one);
  ASSERT_EQ(sys.master.size(), 1u);
  EXPECT_GE(sys.load[sys.master[0]], one.holes_area());

  auto two = domain_family(FamilyKind::multi_hole, {1, 0.25, -0.45, 0, 0.25, 0.45, 0});
  auto sys2 = assemble(mesh_of(two, 0.04), two);
  ASSERT_EQ(sys2.master.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_GE(sys2.load[sys2.master[i]], two.holes()[i].area());
}

TEST(Assemble, HoleCountMismatch) {
  auto one = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  auto m = mesh_of(disk(), 0.1);
  try {
    assemble(m, one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::tag_mismatch);
  }
}

TEST(Solve, ZeroLoad) {
  auto d = disk();
  auto sys = assemble(mesh_of(d, 0.2), d);
  sys.load.setZero();
  auto sol = solve(sys);
  EXPECT_EQ(sol.iterations, 0);
  EXPECT_EQ(sol.T, 0.0);
  for (double v : sol.nodal_u) EXPECT_EQ(v, 0.0);
}

TEST(Solve, RejectsLooseTolerance) {
  auto d = disk();
  auto sys = assemble(mesh_of(d, 0.2), d);
  EXPECT_THROW(solve(sys, 1e-3), Error);
}

TEST(Solve, DiskConvergesQuadratically) {
  auto d = disk();
  auto coarse = std::make_shared<const Mesh>(triangulate(d, 0.08));
  auto fine = std::make_shared<const Mesh>(refine(*coarse));
  auto finer = std::make_shared<const Mesh>(refine(*fine));
  const double T_exact = d.area() * d.area() / (8 * pi);  // polygonal |G| keeps the oracle sharp
  double e[3];
  int k = 0;
  for (auto& m : {coarse, fine, finer}) {
    auto run = solve_torsion(d, m);
    e[k++] = std::abs(run.solution.T - T_exact);
    EXPECT_LT(run.solution.residual_norm, 1e-10);
    EXPECT_LT(rigidity_self_check(run.solution), 1e-8);
    EXPECT_NEAR(max_nodal(run.solution), 0.25, 2e-3);
  }
  double p1 = std::log2(e[0] / e[1]), p2 = std::log2(e[1] / e[2]);
  EXPECT_NEAR(p1, 2.0, 0.3);
  EXPECT_NEAR(p2, 2.0, 0.3);
  EXPECT_LT(e[2] / T_exact, 1e-2);
  EXPECT_NEAR(T_exact, pi / 8, 2e-3);
}

TEST(Solve, ConcentricAnnulusOracle) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0});
  auto run = solve_torsion(d, 0.02);
  EXPECT_NEAR(run.solution.T, 15 * pi / 128, 0.01 * 15 * pi / 128);
  ASSERT_EQ(run.solution.hole_constants.size(), 1u);
  EXPECT_NEAR(run.solution.hole_constants[0], 0.1875, 0.01 * 0.1875);
}

TEST(Solve, EnergyIdentity) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  auto run = solve_torsion(d, 0.05);
  EXPECT_NEAR(run.solution.energy, run.solution.T, 1e-8 * run.solution.T);
  EXPECT_GT(run.solution.min_ritz, 0.0);
}

TEST(ExtendedField, PlateausOnHoles) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  auto run = solve_torsion(d, 0.05);
  auto f = extended_field(run.solution, run.mesh, d);
  EXPECT_TRUE(f.covers_holes);
  ASSERT_EQ(f.plateaus.size(), 1u);
  EXPECT_EQ(f.plateaus[0].value, run.solution.hole_constants[0]);
  EXPECT_NEAR(f.support_measure(), d.outer_area(), 1e-10);
  auto g = omega_field(run.solution, run.mesh);
  EXPECT_NEAR(g.support_measure(), d.area(), 1e-10);
  EXPECT_GE(f.min_value(), -1e-14);
}
