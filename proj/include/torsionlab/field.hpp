#pragma once

#include <memory>
#include <vector>

#include "torsionlab/mesh.hpp"

namespace torsionlab {

struct Plateau {
  double value = 0.0;
  int hole = -1;
  double measure = 0.0;
};

/// Piecewise-linear field on a mesh. With `covers_holes` the hole triangles
/// take part as flat plateaus (the constant extension of a torsion function);
/// otherwise the field lives on Ω only.
struct ScalarField {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> values;  // one per mesh node
  bool covers_holes = false;
  std::vector<Plateau> plateaus;

  template <class F>
  void for_each_triangle(F&& f) const {
    for (auto& t : mesh->triangles) f(t);
    if (covers_holes)
      for (auto& t : mesh->hole_triangles) f(t);
  }

  double support_measure() const {
    double a = mesh->area();
    if (covers_holes)
      for (auto& t : mesh->hole_triangles) a += mesh->triangle_area(t);
    return a;
  }

  double max_value() const {
    double m = 0;
    bool first = true;
    for_each_triangle([&](const Triangle& t) {
      for (int v : t)
        if (first || values[v] > m) {
          m = values[v];
          first = false;
        }
    });
    return m;
  }

  double min_value() const {
    double m = 0;
    bool first = true;
    for_each_triangle([&](const Triangle& t) {
      for (int v : t)
        if (first || values[v] < m) {
          m = values[v];
          first = false;
        }
    });
    return m;
  }
};

inline ScalarField make_field(std::shared_ptr<const Mesh> mesh, std::vector<double> values, bool covers_holes = false) {
  ScalarField f;
  f.mesh = std::move(mesh);
  f.values = std::move(values);
  f.covers_holes = covers_holes;
  return f;
}

}  // namespace torsionlab
