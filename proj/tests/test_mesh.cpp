#include <gtest/gtest.h>

#include "torsionlab/mesh.hpp"

using namespace torsionlab;

namespace {

Domain unit_square() { return validate_domain(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), {}); }

}  // namespace

TEST(Triangulate, UnitSquare) {
  Mesh m = triangulate(unit_square(), 0.1);
  EXPECT_NEAR(m.area(), 1.0, 1e-12);
  EXPECT_EQ(m.tags.size(), m.nodes.size());
  EXPECT_GE(m.triangles.size(), 200u);
  EXPECT_LE(m.triangles.size(), 600u);
  EXPECT_TRUE(m.hole_triangles.empty());
  EXPECT_LE(m.h, 0.1 + 1e-12);
}

TEST(Triangulate, AnnulusConformsToPolygons) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0});
  Mesh m = triangulate(d, 0.05);
  EXPECT_NEAR(m.area(), d.area(), 1e-10);
  EXPECT_NEAR(m.hole_area(0), d.holes_area(), 1e-10);
  EXPECT_EQ(m.hole_count, 1);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    if (m.tags[i].kind == NodeKind::outer) {
      EXPECT_NEAR(norm(m.nodes[i]), 1.0, 1e-3);
    }
    if (m.tags[i].kind == NodeKind::hole) {
      EXPECT_EQ(m.tags[i].hole, 0);
      EXPECT_NEAR(norm(m.nodes[i]), 0.5, 1e-3);
    }
  }
}

TEST(Triangulate, TwoHolesTagged) {
  auto d = domain_family(FamilyKind::multi_hole, {1, 0.25, -0.45, 0, 0.25, 0.45, 0});
  Mesh m = triangulate(d, 0.04);
  EXPECT_EQ(m.hole_count, 2);
  EXPECT_NEAR(m.hole_area(0) + m.hole_area(1), d.holes_area(), 1e-10);
  EXPECT_NEAR(m.area(), d.area(), 1e-10);
}

TEST(Triangulate, FeatureTooSmall) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.45});
  try {
    triangulate(d, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::feature_too_small);
  }
  EXPECT_THROW(triangulate(unit_square(), -1.0), Error);
}

TEST(Triangulate, Deterministic) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  Mesh a = triangulate(d, 0.07), b = triangulate(d, 0.07);
  ASSERT_EQ(a.nodes.size(), b.nodes.size());
  ASSERT_EQ(a.triangles, b.triangles);
  for (std::size_t i = 0; i < a.nodes.size(); ++i) EXPECT_EQ(a.nodes[i].x, b.nodes[i].x);
}

TEST(Refine, QuadruplesTriangles) {
  auto d = domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.2});
  Mesh m = triangulate(d, 0.07);
  Mesh r = refine(m);
  EXPECT_EQ(r.triangles.size(), 4 * m.triangles.size());
  EXPECT_EQ(r.hole_triangles.size(), 4 * m.hole_triangles.size());
  EXPECT_NEAR(r.area(), m.area(), 1e-12);
  EXPECT_NEAR(r.h, 0.5 * m.h, 1e-12);
  auto q = mesh_quality(r);
  EXPECT_TRUE(q.valid);
  EXPECT_NEAR(q.min_angle_deg, mesh_quality(m).min_angle_deg, 1e-9);
}

TEST(MeshQuality, Equilateral) {
  Mesh m;
  m.nodes = {{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
  m.tags.resize(3, {NodeKind::outer, -1});
  m.triangles = {{0, 1, 2}};
  auto q = mesh_quality(m);
  EXPECT_TRUE(q.valid);
  EXPECT_NEAR(q.min_angle_deg, 60.0, 1e-9);
  EXPECT_NEAR(q.max_aspect_ratio, 1.0, 1e-12);
}

TEST(MeshQuality, ProducedMeshesMeetAngleBound) {
  for (auto d : {unit_square(), domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, 0.3}),
                 domain_family(FamilyKind::square_with_square_hole, {2, 1, 0.2})}) {
    auto q = mesh_quality(triangulate(d, 0.04));
    EXPECT_TRUE(q.valid);
    EXPECT_GE(q.min_angle_deg, 20.0);
  }
}

TEST(MeshQuality, DegenerateTriangleReported) {
  Mesh m = triangulate(unit_square(), 0.2);
  m.nodes.push_back({0.5, 0.5});
  m.nodes.push_back({0.6, 0.6});
  m.nodes.push_back({0.7, 0.7});
  m.tags.resize(m.nodes.size());
  int n = int(m.nodes.size());
  m.triangles.push_back({n - 3, n - 2, n - 1});
  auto q = mesh_quality(m);
  EXPECT_FALSE(q.valid);
  ASSERT_FALSE(q.violations.empty());
  EXPECT_NE(q.violations.front().find("degenerate"), std::string::npos);
}
