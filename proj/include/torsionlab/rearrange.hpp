#pragma once

// Level-set machinery for piecewise-linear fields: distribution function,
// decreasing rearrangement, superlevel regions, pseudo-rearrangement sets,
// and the Hardy-Littlewood / Polya-Szego comparisons. Everything about the
// Schwarz rearrangement is expressed through its profile u*(s), s = π|x|².

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/field.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/mesh.hpp"
#include "torsionlab/profile.hpp"

namespace torsionlab {

namespace detail {

// Gauss-Legendre nodes and weights on [0, 1].
template <int N>
struct GaussLegendre;

template <>
struct GaussLegendre<5> {
  static constexpr std::array<double, 5> x{0.04691007703066800, 0.2307653449471585, 0.5, 0.7692346550528415,
                                           0.9530899229693320};
  static constexpr std::array<double, 5> w{0.1184634425280945, 0.2393143352496832, 0.2844444444444444,
                                           0.2393143352496832, 0.1184634425280945};
};

template <>
struct GaussLegendre<8> {
  static constexpr std::array<double, 8> x{0.01985507175123188, 0.1016667612931866, 0.2372337950418355,
                                           0.4082826787521751,  0.5917173212478249, 0.7627662049581645,
                                           0.8983332387068134,  0.9801449282487681};
  static constexpr std::array<double, 8> w{0.05061426814518813, 0.1111905172266872, 0.1568533229389436,
                                           0.1813418916891810,  0.1813418916891810, 0.1568533229389436,
                                           0.1111905172266872,  0.05061426814518813};
};

template <int N, class F>
double gauss(F&& f, double a, double b) {
  double s = 0;
  for (int i = 0; i < N; ++i) s += GaussLegendre<N>::w[i] * f(a + (b - a) * GaussLegendre<N>::x[i]);
  return s * (b - a);
}

struct SortedTriangle {
  double f0, f1, f2;
  double area;
};

inline SortedTriangle sorted_triangle(const ScalarField& f, const Triangle& t) {
  std::array<double, 3> v{f.values[t[0]], f.values[t[1]], f.values[t[2]]};
  std::sort(v.begin(), v.end());
  return {v[0], v[1], v[2], f.mesh->triangle_area(t)};
}

// |T ∩ {f > t}| for a linear function on a triangle.
inline double superlevel_area(const SortedTriangle& s, double t) {
  if (t < s.f0) return s.area;
  if (t >= s.f2) return 0.0;
  if (t >= s.f1) return s.area * (s.f2 - t) * (s.f2 - t) / ((s.f2 - s.f0) * (s.f2 - s.f1));
  return s.area - s.area * (t - s.f0) * (t - s.f0) / ((s.f1 - s.f0) * (s.f2 - s.f0));
}

inline double p1_integral_product(const std::array<double, 3>& f, const std::array<double, 3>& g, double area) {
  double diag = f[0] * g[0] + f[1] * g[1] + f[2] * g[2];
  double sums = (f[0] + f[1] + f[2]) * (g[0] + g[1] + g[2]);
  return area / 12.0 * (diag + sums);
}

inline double p1_gradient_squared(const Mesh& m, const Triangle& t, const std::vector<double>& v) {
  Point p[3] = {m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]};
  double area = 0.5 * orient(p[0], p[1], p[2]);
  double gx = 0, gy = 0;
  for (int i = 0; i < 3; ++i) {
    Point q = p[(i + 1) % 3], r = p[(i + 2) % 3];
    gx += v[t[i]] * (q.y - r.y);
    gy += v[t[i]] * (r.x - q.x);
  }
  return (gx * gx + gy * gy) / (4.0 * area * area);
}

}  // namespace detail

/// μ(t) = |{f > t}|, exact for P1 fields (flat triangles count fully when
/// their value exceeds t).
inline double distribution_function(const ScalarField& f, double t) {
  double mu = 0;
  f.for_each_triangle([&](const Triangle& tr) { mu += detail::superlevel_area(detail::sorted_triangle(f, tr), t); });
  return mu;
}

/// Exact distribution function of a P1 field and its generalised inverse.
/// Between consecutive nodal levels L_k < L_{k+1}, μ is a quadratic in
/// τ = t - L_k; flat triangles produce jumps at their level.
class Rearrangement {
 public:
  explicit Rearrangement(const ScalarField& f) {
    std::vector<detail::SortedTriangle> tris;
    f.for_each_triangle([&](const Triangle& t) { tris.push_back(detail::sorted_triangle(f, t)); });
    for (auto& s : tris) {
      levels_.push_back(s.f0);
      levels_.push_back(s.f1);
      levels_.push_back(s.f2);
      total_ += s.area;
    }
    std::sort(levels_.begin(), levels_.end());
    levels_.erase(std::unique(levels_.begin(), levels_.end()), levels_.end());
    if (levels_.empty()) levels_.push_back(0.0);
    const std::size_t K = levels_.size() - 1;
    a_.assign(K, 0.0);
    b_.assign(K, 0.0);
    c_.assign(K, 0.0);
    std::vector<double> below(K + 1, 0.0);  // difference array for bands wholly below a triangle
    auto idx = [&](double v) {
      return std::size_t(std::lower_bound(levels_.begin(), levels_.end(), v) - levels_.begin());
    };
    for (auto& s : tris) {
      std::size_t i0 = idx(s.f0), i1 = idx(s.f1), i2 = idx(s.f2);
      below[0] += s.area;
      below[i0] -= s.area;
      if (i0 == i2) continue;  // flat
      if (i1 > i0) {
        double D = (s.f1 - s.f0) * (s.f2 - s.f0);
        for (std::size_t k = i0; k < i1; ++k) {
          double e = levels_[k] - s.f0;
          a_[k] += s.area - s.area * e * e / D;
          b_[k] += -2.0 * s.area * e / D;
          c_[k] += -s.area / D;
        }
      }
      double D = (s.f2 - s.f0) * (s.f2 - s.f1);
      for (std::size_t k = i1; k < i2; ++k) {
        double g = s.f2 - levels_[k];
        a_[k] += s.area * g * g / D;
        b_[k] += -2.0 * s.area * g / D;
        c_[k] += s.area / D;
      }
    }
    double run = 0;
    for (std::size_t k = 0; k < K; ++k) {
      run += below[k];
      a_[k] += run;
    }
  }

  double measure() const { return total_; }
  double max() const { return levels_.back(); }
  double min() const { return levels_.front(); }
  const std::vector<double>& levels() const { return levels_; }
  std::size_t bands() const { return a_.size(); }

  /// μ(t) = |{f > t}|.
  double mu(double t) const {
    if (t < levels_.front()) return total_;
    std::size_t k = std::size_t(std::upper_bound(levels_.begin(), levels_.end(), t) - levels_.begin()) - 1;
    if (k >= bands()) return 0.0;
    return band(k, t - levels_[k]);
  }

  /// μ(t⁻) = |{f ≥ t}|.
  double mu_left(double t) const {
    if (t <= levels_.front()) return total_;
    std::size_t k = std::size_t(std::lower_bound(levels_.begin(), levels_.end(), t) - levels_.begin()) - 1;
    if (k >= bands()) return 0.0;
    return band(k, t - levels_[k]);
  }

  /// -μ'(t) inside a band (0 at plateau jumps, which are not differentiable).
  double mu_slope(double t) const {
    if (t < levels_.front() || t >= levels_.back()) return 0.0;
    std::size_t k = std::size_t(std::upper_bound(levels_.begin(), levels_.end(), t) - levels_.begin()) - 1;
    double tau = t - levels_[k];
    return -(b_[k] + 2.0 * c_[k] * tau);
  }

  /// u*(s) = inf{t >= 0 : μ(t) < s}; u*(0) is the maximum.
  double operator()(double s) const {
    if (s <= 0) return std::max(max(), 0.0);
    const std::size_t K = bands();
    auto at = [&](std::size_t k) { return k < K ? a_[k] : 0.0; };
    // Smallest k with μ(L_k) < s.
    std::size_t lo = 0, hi = K;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (at(mid) < s)
        hi = mid;
      else
        lo = mid + 1;
    }
    std::size_t k = lo;
    double t;
    if (k == 0) {
      t = s > total_ ? 0.0 : levels_[0];
    } else {
      std::size_t j = k - 1;
      double width = levels_[k] - levels_[j];
      if (band(j, width) < s)
        t = levels_[j] + invert_band(j, s, width);
      else
        t = levels_[k];
    }
    return std::max(t, 0.0);
  }

  /// ∫_0^{|support|} u*(s)^p ds, evaluated in the measure variable.
  double integral_pow(int p) const {
    double sum = 0;
    const std::size_t K = bands();
    auto powp = [p](double x) { return std::pow(std::max(x, 0.0), p); };
    if (total_ > a0()) sum += (total_ - a0()) * powp(levels_[0]);
    for (std::size_t j = 0; j < K; ++j) {
      double width = levels_[j + 1] - levels_[j];
      double s_hi = a_[j], s_lo = band(j, width);
      if (s_hi > s_lo)
        sum += detail::gauss<5>([&](double s) { return powp(levels_[j] + invert_band(j, s, width)); }, s_lo, s_hi);
      double next = j + 1 < K ? a_[j + 1] : 0.0;
      if (s_lo > next) sum += (s_lo - next) * powp(levels_[j + 1]);
    }
    return sum;
  }

  /// ∫|∇u♯|² = ∫ (u*'(s))² 4πs ds = Σ_bands ∫ 4π μ(t) / (-μ'(t)) dt.
  double dirichlet_sharp() const {
    double sum = 0;
    for (std::size_t j = 0; j < bands(); ++j) {
      double width = levels_[j + 1] - levels_[j];
      sum += detail::gauss<8>(
          [&](double tau) {
            double slope = -(b_[j] + 2.0 * c_[j] * tau);
            return slope > 0 ? 4.0 * pi * band(j, tau) / slope : 0.0;
          },
          0.0, width);
    }
    return sum;
  }

  /// Sorted measure values where u* changes formula.
  std::vector<double> s_breakpoints() const {
    std::vector<double> s{0.0, total_};
    for (std::size_t j = 0; j < bands(); ++j) {
      s.push_back(a_[j]);
      s.push_back(band(j, levels_[j + 1] - levels_[j]));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  /// |{|∇f♯| < δ} ∩ {lo < f♯ < max}| in the plane, with |∇f♯| = 2√(πμ)/(-μ')
  /// on each band. Inside a band the condition is a quadratic inequality in
  /// τ, so the measure is exact; interior plateaus count with gradient 0.
  double sharp_gradient_measure(double delta, double lo = 0.0) const {
    double total = 0;
    const std::size_t K = bands();
    for (std::size_t j = 0; j < K; ++j) {
      double width = levels_[j + 1] - levels_[j];
      double t0 = std::max(0.0, lo - levels_[j]);
      if (t0 >= width) continue;
      const double a = a_[j], b = b_[j], c = c_[j], d2 = delta * delta;
      // q(τ) = 4πμ(τ) - δ²μ'(τ)² < 0
      double qa = 4 * pi * c - 4 * d2 * c * c, qb = 4 * pi * b - 4 * d2 * b * c, qc = 4 * pi * a - d2 * b * b;
      auto q = [&](double tau) { return qc + (qb + qa * tau) * tau; };
      std::vector<double> cuts{t0, width};
      if (qa != 0) {
        double disc = qb * qb - 4 * qa * qc;
        if (disc > 0) {
          double sq = std::sqrt(disc);
          for (double r : {(-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)})
            if (r > t0 && r < width) cuts.push_back(r);
        }
      } else if (qb != 0) {
        double r = -qc / qb;
        if (r > t0 && r < width) cuts.push_back(r);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        if (q(mid) < 0 && -(b + 2 * c * mid) > 0) total += band(j, cuts[i]) - band(j, cuts[i + 1]);
      }
      // plateau sitting at the upper end of this band
      if (j + 1 < K && levels_[j + 1] > lo) total += std::max(0.0, band(j, width) - a_[j + 1]);
    }
    return total;
  }

  MonotoneProfile sample(int n) const {
    MonotoneProfile p;
    for (int i = 0; i <= n; ++i) {
      double s = total_ * i / n;
      p.s.push_back(s);
      p.v.push_back((*this)(s));
    }
    return p;
  }

 private:
  double a0() const { return bands() > 0 ? a_[0] : 0.0; }

  double band(std::size_t k, double tau) const { return a_[k] + (b_[k] + c_[k] * tau) * tau; }

  // τ in [0, width] with band(k, τ) = s (band values are nonincreasing).
  double invert_band(std::size_t k, double s, double width) const {
    double a = c_[k], b = b_[k], c = a_[k] - s;
    double tau = -1;
    if (a == 0) {
      if (b != 0) tau = -c / b;
    } else {
      double disc = b * b - 4 * a * c;
      if (disc >= 0) {
        double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        double r1 = q / a, r2 = q != 0 ? c / q : -1;
        const double slack = 1e-12 * std::max(width, 1e-300);
        for (double r : {r1, r2})
          if (r >= -slack && r <= width + slack) {
            tau = r;
            break;
          }
      }
    }
    if (!(tau >= 0 && tau <= width)) {
      double lo = 0, hi = width;
      for (int it = 0; it < 200 && hi > lo; ++it) {
        double mid = 0.5 * (lo + hi);
        if (band(k, mid) >= s)
          lo = mid;
        else
          hi = mid;
      }
      tau = 0.5 * (lo + hi);
    }
    return std::clamp(tau, 0.0, width);
  }

  std::vector<double> levels_;
  std::vector<double> a_, b_, c_;
  double total_ = 0.0;
};

inline MonotoneProfile decreasing_rearrangement(const ScalarField& f, int samples = 1024) {
  return Rearrangement(f).sample(samples);
}

/// A planar set made of per-triangle convex pieces; the region is their
/// union with shared interior edges cancelled.
struct PieceSet {
  std::vector<std::vector<Point>> pieces;
  double hole_measure = 0.0;  // part lying in hole triangles

  Region region() const { return Region::from_rings(pieces); }
};

namespace detail {

// Point on edge (a, b) where the field crosses t; canonical in the node
// order so that neighbouring triangles produce bit-identical points.
inline Point level_cut(const ScalarField& f, int a, int b, double t) {
  if (a > b) std::swap(a, b);
  double fa = f.values[a], fb = f.values[b];
  double r = (t - fa) / (fb - fa);
  if (r <= 0) return f.mesh->nodes[a];
  if (r >= 1) return f.mesh->nodes[b];
  Point pa = f.mesh->nodes[a], pb = f.mesh->nodes[b];
  return pa + r * (pb - pa);
}

// Piece of triangle t where f > t (convex, ccw) — empty if none.
inline std::vector<Point> superlevel_piece(const ScalarField& f, const Triangle& tr, double t) {
  std::vector<Point> out;
  for (int i = 0; i < 3; ++i) {
    int a = tr[i], b = tr[(i + 1) % 3];
    bool ia = f.values[a] > t, ib = f.values[b] > t;
    if (ia) out.push_back(f.mesh->nodes[a]);
    if (ia != ib) out.push_back(level_cut(f, a, b, t));
  }
  if (out.size() < 3) out.clear();
  return out;
}

inline double ring_area(const std::vector<Point>& r) {
  double a = 0;
  for (std::size_t i = 0; i < r.size(); ++i) a += cross(r[i], r[(i + 1) % r.size()]);
  return 0.5 * a;
}

}  // namespace detail

/// {f > t} as per-triangle pieces.
inline PieceSet superlevel_pieces(const ScalarField& f, double t) {
  PieceSet ps;
  for (auto& tr : f.mesh->triangles) {
    auto p = detail::superlevel_piece(f, tr, t);
    if (!p.empty()) ps.pieces.push_back(std::move(p));
  }
  if (f.covers_holes)
    for (auto& tr : f.mesh->hole_triangles) {
      auto p = detail::superlevel_piece(f, tr, t);
      if (p.empty()) continue;
      ps.hole_measure += detail::ring_area(p);
      ps.pieces.push_back(std::move(p));
    }
  return ps;
}

inline Region level_set_region(const ScalarField& f, double t) { return superlevel_pieces(f, t).region(); }

inline void check_regular_level(const ScalarField& f, double t) {
  double range = std::max(std::abs(f.max_value() - f.min_value()), 1e-300);
  for (auto& p : f.plateaus)
    if (std::abs(t - p.value) <= 1e-12 * range)
      throw Error(ErrorCode::plateau_level, "level coincides with the plateau of hole " + std::to_string(p.hole),
                  p.hole);
}

/// Perimeter of {f > t}: the level polyline, plus hole boundaries when the
/// field lives on Ω only and the set reaches them.
inline double level_set_perimeter(const ScalarField& f, double t) {
  check_regular_level(f, t);
  return level_set_region(f, t).perimeter();
}

/// Measure of {t1 < f <= t2} on the non-flat triangles (the coarea side of
/// -μ' >= ∫_{f=t} 1/|∇f| in integrated form).
inline double coarea_band_measure(const ScalarField& f, double t1, double t2) {
  double m = 0;
  f.for_each_triangle([&](const Triangle& tr) {
    auto s = detail::sorted_triangle(f, tr);
    if (s.f0 == s.f2) return;
    m += detail::superlevel_area(s, t1) - detail::superlevel_area(s, t2);
  });
  return m;
}

struct PseudoSet {
  PieceSet pieces;
  Region region;
  double measure = 0.0;
  double hole_measure = 0.0;  // |D(s) ∩ S|
  double level = 0.0;         // u*(s)
};

/// Pseudo-rearrangement set D(s): {f > u*(s)} completed inside the plateau
/// {f = u*(s)} by whole flat triangles taken in order of centroid distance
/// to the plateau centroid (ties by index); the last one is replaced by a
/// homothetic sub-triangle so that |D(s)| = s.
inline PseudoSet pseudo_set(const ScalarField& f, const Rearrangement& r, double s) {
  PseudoSet out;
  s = std::clamp(s, 0.0, r.measure());
  if (s <= 0) return out;
  double t = r(s);
  out.level = t;
  out.pieces = superlevel_pieces(f, t);
  double have = 0;
  for (auto& p : out.pieces.pieces) have += detail::ring_area(p);
  double need = s - have;
  if (need > 0) {
    struct Flat {
      Triangle tri;
      bool in_hole;
      double area;
      Point centroid;
      std::size_t index;
    };
    std::vector<Flat> flats;
    std::size_t index = 0;
    auto consider = [&](const Triangle& tr, bool in_hole) {
      if (f.values[tr[0]] == t && f.values[tr[1]] == t && f.values[tr[2]] == t) {
        const auto& n = f.mesh->nodes;
        flats.push_back({tr, in_hole, f.mesh->triangle_area(tr), (1.0 / 3.0) * (n[tr[0]] + n[tr[1]] + n[tr[2]]),
                         index});
      }
      ++index;
    };
    for (auto& tr : f.mesh->triangles) consider(tr, false);
    if (f.covers_holes)
      for (auto& tr : f.mesh->hole_triangles) consider(tr, true);
    Point c{};
    double total = 0;
    for (auto& fl : flats) {
      c = c + fl.area * fl.centroid;
      total += fl.area;
    }
    if (total > 0) c = (1.0 / total) * c;
    std::stable_sort(flats.begin(), flats.end(), [&](const Flat& a, const Flat& b) {
      double da = dist(a.centroid, c), db = dist(b.centroid, c);
      if (da != db) return da < db;
      return a.index < b.index;
    });
    const auto& n = f.mesh->nodes;
    for (auto& fl : flats) {
      if (need <= 0) break;
      std::vector<Point> piece{n[fl.tri[0]], n[fl.tri[1]], n[fl.tri[2]]};
      double area = fl.area;
      if (fl.area > need) {
        double lambda = std::sqrt(need / fl.area);
        Point o = piece[0];
        piece = {o, o + lambda * (piece[1] - o), o + lambda * (piece[2] - o)};
        area = detail::ring_area(piece);
      }
      need -= area;
      if (fl.in_hole) out.pieces.hole_measure += area;
      out.pieces.pieces.push_back(std::move(piece));
    }
  }
  out.region = out.pieces.region();
  out.measure = out.region.area();
  out.hole_measure = out.pieces.hole_measure;
  return out;
}

inline PseudoSet pseudo_set(const ScalarField& f, double s) { return pseudo_set(f, Rearrangement(f), s); }

struct HardyLittlewood {
  double lhs = 0.0;  // ∫ |f g|
  double rhs = 0.0;  // ∫ f* g*
};

/// Both sides of ∫|fg| <= ∫ f* g*. The left side is exact when f g keeps
/// its sign inside each triangle (always the case for nonnegative fields).
inline HardyLittlewood hardy_littlewood_check(const ScalarField& f, const ScalarField& g) {
  if (f.mesh != g.mesh || f.covers_holes != g.covers_holes || f.values.size() != g.values.size())
    throw Error(ErrorCode::mesh_mismatch, "fields live on different meshes");
  HardyLittlewood out;
  f.for_each_triangle([&](const Triangle& t) {
    std::array<double, 3> a{std::abs(f.values[t[0]]), std::abs(f.values[t[1]]), std::abs(f.values[t[2]])};
    std::array<double, 3> b{std::abs(g.values[t[0]]), std::abs(g.values[t[1]]), std::abs(g.values[t[2]])};
    out.lhs += detail::p1_integral_product(a, b, f.mesh->triangle_area(t));
  });
  auto absolute = [](const ScalarField& x) {
    ScalarField y = x;
    for (auto& v : y.values) v = std::abs(v);
    return y;
  };
  Rearrangement rf(absolute(f)), rg(absolute(g));
  auto s = rf.s_breakpoints();
  auto sg = rg.s_breakpoints();
  s.insert(s.end(), sg.begin(), sg.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    out.rhs += detail::gauss<5>([&](double x) { return rf(x) * rg(x); }, s[i], s[i + 1]);
  return out;
}

inline double dirichlet_energy(const ScalarField& f) {
  double e = 0;
  f.for_each_triangle([&](const Triangle& t) {
    e += f.mesh->triangle_area(t) * detail::p1_gradient_squared(*f.mesh, t, f.values);
  });
  return e;
}

/// ∫ f^p for p in {1, 2}, exact for P1 fields.
inline double lp_norm_pow(const ScalarField& f, int p) {
  if (p != 1 && p != 2) throw Error(ErrorCode::invalid_argument, "only p = 1 and p = 2 are supported");
  double s = 0;
  f.for_each_triangle([&](const Triangle& t) {
    std::array<double, 3> v{f.values[t[0]], f.values[t[1]], f.values[t[2]]};
    double area = f.mesh->triangle_area(t);
    if (p == 1)
      s += area * (v[0] + v[1] + v[2]) / 3.0;
    else
      s += detail::p1_integral_product(v, v, area);
  });
  return s;
}

struct PolyaSzego {
  double dirichlet = 0.0;
  double dirichlet_sharp = 0.0;
  double E = 0.0;  // dirichlet / dirichlet_sharp - 1
};

inline PolyaSzego polya_szego_check(const ScalarField& f, const Rearrangement& r) {
  PolyaSzego out;
  out.dirichlet = dirichlet_energy(f);
  out.dirichlet_sharp = r.dirichlet_sharp();
  out.E = out.dirichlet_sharp > 0 ? out.dirichlet / out.dirichlet_sharp - 1.0 : 0.0;
  return out;
}

inline PolyaSzego polya_szego_check(const ScalarField& f) { return polya_szego_check(f, Rearrangement(f)); }

/// min(f, L) as an exact P1 field: triangles crossing L are split along the
/// level line, so the result lives on a (slightly) finer mesh.
inline ScalarField truncate(const ScalarField& f, double L) {
  const Mesh& m = *f.mesh;
  auto out_mesh = std::make_shared<Mesh>();
  out_mesh->nodes = m.nodes;
  out_mesh->tags = m.tags;
  out_mesh->hole_count = m.hole_count;
  out_mesh->hole_triangles = m.hole_triangles;
  out_mesh->hole_of = m.hole_of;
  out_mesh->h = m.h;
  std::vector<double> values = f.values;
  std::map<std::pair<int, int>, int> cuts;
  auto cut_node = [&](int a, int b) {
    auto key = std::make_pair(std::min(a, b), std::max(a, b));
    auto it = cuts.find(key);
    if (it != cuts.end()) return it->second;
    int id = int(out_mesh->nodes.size());
    out_mesh->nodes.push_back(detail::level_cut(f, a, b, L));
    out_mesh->tags.push_back({});
    values.push_back(L);
    cuts.emplace(key, id);
    return id;
  };
  for (auto& t : m.triangles) {
    double lo = std::min({f.values[t[0]], f.values[t[1]], f.values[t[2]]});
    double hi = std::max({f.values[t[0]], f.values[t[1]], f.values[t[2]]});
    if (!(lo < L && L < hi)) {
      out_mesh->triangles.push_back(t);
      continue;
    }
    std::vector<int> above, below;
    for (int i = 0; i < 3; ++i) {
      int a = t[i], b = t[(i + 1) % 3];
      double fa = f.values[a], fb = f.values[b];
      if (fa >= L) above.push_back(a);
      if (fa <= L) below.push_back(a);
      if ((fa < L && fb > L) || (fa > L && fb < L)) {
        int c = cut_node(a, b);
        above.push_back(c);
        below.push_back(c);
      }
    }
    for (auto* poly : {&above, &below})
      for (std::size_t k = 1; k + 1 < poly->size(); ++k) {
        Triangle nt{(*poly)[0], (*poly)[k], (*poly)[k + 1]};
        if (out_mesh->triangle_area(nt) > 0) out_mesh->triangles.push_back(nt);
      }
  }
  for (auto& v : values) v = std::min(v, L);
  ScalarField w = make_field(out_mesh, std::move(values), f.covers_holes);
  for (auto p : f.plateaus) {
    p.value = std::min(p.value, L);
    w.plateaus.push_back(p);
  }
  return w;
}

}  // namespace torsionlab
