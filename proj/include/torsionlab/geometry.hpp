#pragma once

// Planar polygonal geometry: polygons, multiply connected domains, regions
// described by their oriented boundary, disk overlaps and the two asymmetry
// indices (Fraenkel and annular).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/optimize.hpp"

namespace torsionlab {

inline constexpr double pi = std::numbers::pi;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

struct BoundingBox {
  Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Point hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

  void add(Point p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diameter() const { return std::hypot(width(), height()); }
  bool empty() const { return lo.x > hi.x; }
};

namespace detail {

inline int sign_of(double v) { return (v > 0) - (v < 0); }

inline bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

/// Closed-segment intersection test (touching counts).
inline bool segments_intersect(Point a, Point b, Point c, Point d) {
  int o1 = sign_of(orient(a, b, c));
  int o2 = sign_of(orient(a, b, d));
  int o3 = sign_of(orient(c, d, a));
  int o4 = sign_of(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

inline double point_segment_distance(Point p, Point a, Point b) {
  Point d = b - a;
  double len2 = dot(d, d);
  double t = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return dist(p, a + t * d);
}

inline double segment_distance(Point a, Point b, Point c, Point d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

/// Signed area of disk(0, r) intersected with the triangle (0, a, b).
inline double disk_triangle_area(Point a, Point b, double r) {
  const double r2 = r * r;
  Point d = b - a;
  double A = dot(d, d);
  std::array<double, 4> ts{0.0, 0.0, 0.0, 0.0};
  int nt = 1;
  if (A > 0) {
    double B = dot(a, d);
    double C = dot(a, a) - r2;
    double disc = B * B - A * C;
    if (disc > 0) {
      double sq = std::sqrt(disc);
      double t1 = (-B - sq) / A;
      double t2 = (-B + sq) / A;
      if (t1 > 0 && t1 < 1) ts[nt++] = t1;
      if (t2 > 0 && t2 < 1) ts[nt++] = t2;
    }
  }
  ts[nt++] = 1.0;
  double area = 0.0;
  for (int i = 0; i + 1 < nt; ++i) {
    Point p = a + ts[i] * d;
    Point q = a + ts[i + 1] * d;
    Point m = a + (0.5 * (ts[i] + ts[i + 1])) * d;
    if (dot(m, m) <= r2) {
      area += 0.5 * cross(p, q);
    } else {
      area += 0.5 * r2 * std::atan2(cross(p, q), dot(p, q));
    }
  }
  return area;
}

/// Parameter interval of a + t (b - a), t in [0,1], inside the closed disk.
inline bool segment_disk_interval(Point a, Point b, Point c, double r, double& lo, double& hi) {
  Point d = b - a;
  Point f = a - c;
  double A = dot(d, d);
  double B = dot(f, d);
  double C = dot(f, f) - r * r;
  if (A == 0) {
    lo = 0;
    hi = 1;
    return C <= 0;
  }
  double disc = B * B - A * C;
  if (disc <= 0) return false;
  double sq = std::sqrt(disc);
  lo = std::max(0.0, (-B - sq) / A);
  hi = std::min(1.0, (-B + sq) / A);
  return lo < hi;
}

}  // namespace detail

/// Simple counterclockwise polygon.
class Polygon {
 public:
  Polygon() = default;

  /// Validates and normalises to counterclockwise order. Throws
  /// `invalid_polygon` (too few vertices, zero area, repeated vertices) or
  /// `self_intersecting`.
  explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() >= 2 && vertices_.front() == vertices_.back()) vertices_.pop_back();
    if (vertices_.size() < 3) throw Error(ErrorCode::invalid_polygon, "polygon needs at least 3 vertices");
    for (auto& p : vertices_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw Error(ErrorCode::invalid_polygon, "non-finite vertex coordinate");
    double a = signed_area_of(vertices_);
    if (!(std::abs(a) > 0)) throw Error(ErrorCode::invalid_polygon, "polygon has zero area");
    if (a < 0) std::reverse(vertices_.begin(), vertices_.end());
    check_simple();
  }

  static Polygon regular(int k, double radius, Point center = {}, double phase = 0.0) {
    std::vector<Point> v;
    v.reserve(k);
    for (int j = 0; j < k; ++j) {
      double t = phase + 2.0 * pi * j / k;
      v.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return Polygon(std::move(v));
  }

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point operator[](std::size_t i) const { return vertices_[i]; }
  Point edge_start(std::size_t i) const { return vertices_[i]; }
  Point edge_end(std::size_t i) const { return vertices_[(i + 1) % vertices_.size()]; }

  double area() const { return signed_area_of(vertices_); }

  double perimeter() const {
    double p = 0;
    for (std::size_t i = 0; i < size(); ++i) p += dist(edge_start(i), edge_end(i));
    return p;
  }

  Point centroid() const {
    double cx = 0, cy = 0, a = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      Point p = edge_start(i), q = edge_end(i);
      double c = cross(p, q);
      a += c;
      cx += (p.x + q.x) * c;
      cy += (p.y + q.y) * c;
    }
    return {cx / (3 * a), cy / (3 * a)};
  }

  BoundingBox bbox() const {
    BoundingBox b;
    for (auto p : vertices_) b.add(p);
    return b;
  }

  /// Strict interior test by winding number; boundary points are unspecified.
  bool contains(Point p) const {
    int wn = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      Point a = edge_start(i), b = edge_end(i);
      if (a.y <= p.y) {
        if (b.y > p.y && orient(a, b, p) > 0) ++wn;
      } else if (b.y <= p.y && orient(a, b, p) < 0) {
        --wn;
      }
    }
    return wn != 0;
  }

  Polygon transformed(const std::function<Point(Point)>& f) const {
    std::vector<Point> v;
    v.reserve(size());
    for (auto p : vertices_) v.push_back(f(p));
    return Polygon(std::move(v));
  }

  bool intersects_boundary(const Polygon& other) const {
    BoundingBox a = bbox(), b = other.bbox();
    if (a.hi.x < b.lo.x || b.hi.x < a.lo.x || a.hi.y < b.lo.y || b.hi.y < a.lo.y) return false;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < other.size(); ++j)
        if (detail::segments_intersect(edge_start(i), edge_end(i), other.edge_start(j), other.edge_end(j)))
          return true;
    return false;
  }

  double boundary_distance(const Polygon& other) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < other.size(); ++j)
        d = std::min(d, detail::segment_distance(edge_start(i), edge_end(i), other.edge_start(j),
                                                 other.edge_end(j)));
    return d;
  }

 private:
  static double signed_area_of(const std::vector<Point>& v) {
    double a = 0;
    for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
    return 0.5 * a;
  }

  void check_simple() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (edge_start(i) == edge_end(i)) throw Error(ErrorCode::invalid_polygon, "repeated vertex");
      // Adjacent edges may only share their common vertex.
      Point a = edge_start(i), b = edge_end(i), c = edge_end((i + 1) % n);
      if (orient(a, b, c) == 0 && dot(b - a, c - b) < 0)
        throw Error(ErrorCode::self_intersecting, "polygon folds back on itself at vertex " +
                                                      std::to_string((i + 1) % n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (detail::segments_intersect(edge_start(i), edge_end(i), edge_start(j), edge_end(j)))
          throw Error(ErrorCode::self_intersecting,
                      "edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
    }
  }

  std::vector<Point> vertices_;
};

struct Segment {
  Point a;
  Point b;
};

struct Disk {
  Point center;
  double radius = 0.0;
};

inline double disk_area(double radius) { return pi * radius * radius; }
inline double radius_of_area(double area) { return std::sqrt(std::max(area, 0.0) / pi); }

/// Area of the intersection of two disks.
inline double lens_area(double r1, double r2, double d) {
  if (r1 <= 0 || r2 <= 0) return 0.0;
  if (d >= r1 + r2) return 0.0;
  if (d <= std::abs(r1 - r2)) return disk_area(std::min(r1, r2));
  double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2 * d * r1), -1.0, 1.0));
  double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2 * d * r2), -1.0, 1.0));
  double k = std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k;
}

/// A bounded planar set stored as its positively oriented boundary (a
/// collection of directed segments whose winding number is the indicator of
/// the set). Area and disk overlaps are line integrals over the boundary, so
/// any decomposition into pieces gives the same values; coincident opposite
/// segments of adjacent pieces are cancelled on construction.
class Region {
 public:
  Region() = default;

  /// Each ring is a closed polyline; ccw rings add, cw rings subtract.
  static Region from_rings(const std::vector<std::vector<Point>>& rings) {
    Region r;
    std::vector<Segment> segs;
    for (auto& ring : rings)
      for (std::size_t i = 0; i < ring.size(); ++i) segs.push_back({ring[i], ring[(i + 1) % ring.size()]});
    r.assign(std::move(segs));
    return r;
  }

  static Region from_polygon(const Polygon& p) {
    return from_rings({std::vector<Point>(p.vertices().begin(), p.vertices().end())});
  }

  static Region from_segments(std::vector<Segment> segs) {
    Region r;
    r.assign(std::move(segs));
    return r;
  }

  std::span<const Segment> segments() const { return segments_; }
  double area() const { return area_; }
  double perimeter() const { return perimeter_; }
  const BoundingBox& bbox() const { return bbox_; }
  bool empty() const { return segments_.empty(); }

  Point centroid() const {
    double cx = 0, cy = 0, a = 0;
    for (auto& s : segments_) {
      double c = cross(s.a, s.b);
      a += c;
      cx += (s.a.x + s.b.x) * c;
      cy += (s.a.y + s.b.y) * c;
    }
    if (a == 0) return {};
    return {cx / (3 * a), cy / (3 * a)};
  }

  int winding(Point p) const {
    int wn = 0;
    for (auto& s : segments_) {
      if (s.a.y <= p.y) {
        if (s.b.y > p.y && orient(s.a, s.b, p) > 0) ++wn;
      } else if (s.b.y <= p.y && orient(s.a, s.b, p) < 0) {
        --wn;
      }
    }
    return wn;
  }

  bool contains(Point p) const { return winding(p) > 0; }

  /// |region ∩ B(center, radius)| by the exact circular-segment decomposition.
  double disk_overlap(Point center, double radius) const {
    if (radius <= 0) return 0.0;
    if (bbox_.empty()) return 0.0;
    double dx = std::max({bbox_.lo.x - center.x, 0.0, center.x - bbox_.hi.x});
    double dy = std::max({bbox_.lo.y - center.y, 0.0, center.y - bbox_.hi.y});
    if (dx * dx + dy * dy >= radius * radius) return 0.0;
    double a = 0;
    for (auto& s : segments_) a += detail::disk_triangle_area(s.a - center, s.b - center, radius);
    return a;
  }

  /// |region ∩ D1 ∩ D2| by Green's theorem on the clipped boundary.
  double two_disk_overlap(const Disk& d1, const Disk& d2) const {
    if (d1.radius <= 0 || d2.radius <= 0) return 0.0;
    double cd = dist(d1.center, d2.center);
    if (cd >= d1.radius + d2.radius) return 0.0;
    if (cd + d2.radius <= d1.radius) return disk_overlap(d2.center, d2.radius);
    if (cd + d1.radius <= d2.radius) return disk_overlap(d1.center, d1.radius);

    double total = 0.0;
    for (auto& s : segments_) {
      double lo1, hi1, lo2, hi2;
      if (!detail::segment_disk_interval(s.a, s.b, d1.center, d1.radius, lo1, hi1)) continue;
      if (!detail::segment_disk_interval(s.a, s.b, d2.center, d2.radius, lo2, hi2)) continue;
      double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
      if (lo >= hi) continue;
      Point p = s.a + lo * (s.b - s.a), q = s.a + hi * (s.b - s.a);
      total += 0.5 * cross(p, q);
    }
    total += arc_contribution(d1, d2);
    total += arc_contribution(d2, d1);
    return total;
  }

  /// Closed boundary loops (for plotting); open chains are returned as-is.
  std::vector<std::vector<Point>> polylines() const {
    std::multimap<Point, std::size_t> by_start;
    for (std::size_t i = 0; i < segments_.size(); ++i) by_start.emplace(segments_[i].a, i);
    std::vector<char> used(segments_.size(), 0);
    std::vector<std::vector<Point>> loops;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      if (used[i]) continue;
      std::vector<Point> loop{segments_[i].a};
      std::size_t cur = i;
      while (true) {
        used[cur] = 1;
        Point end = segments_[cur].b;
        loop.push_back(end);
        auto [lo, hi] = by_start.equal_range(end);
        std::size_t next = segments_.size();
        for (auto it = lo; it != hi; ++it)
          if (!used[it->second]) {
            next = it->second;
            break;
          }
        if (next == segments_.size()) break;
        cur = next;
      }
      loops.push_back(std::move(loop));
    }
    return loops;
  }

  Region transformed(const std::function<Point(Point)>& f) const {
    std::vector<Segment> segs;
    segs.reserve(segments_.size());
    for (auto& s : segments_) segs.push_back({f(s.a), f(s.b)});
    return from_segments(std::move(segs));
  }

 private:
  void assign(std::vector<Segment> segs) {
    using Key = std::tuple<double, double, double, double>;
    std::map<Key, std::vector<std::size_t>> open;
    std::vector<char> alive(segs.size(), 0);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      auto& s = segs[i];
      if (s.a == s.b) continue;
      Key reverse{s.b.x, s.b.y, s.a.x, s.a.y};
      auto it = open.find(reverse);
      if (it != open.end() && !it->second.empty()) {
        alive[it->second.back()] = 0;
        it->second.pop_back();
        continue;
      }
      alive[i] = 1;
      open[Key{s.a.x, s.a.y, s.b.x, s.b.y}].push_back(i);
    }
    segments_.clear();
    area_ = 0;
    perimeter_ = 0;
    bbox_ = {};
    for (std::size_t i = 0; i < segs.size(); ++i) {
      if (!alive[i]) continue;
      segments_.push_back(segs[i]);
      area_ += 0.5 * cross(segs[i].a, segs[i].b);
      perimeter_ += dist(segs[i].a, segs[i].b);
      bbox_.add(segs[i].a);
      bbox_.add(segs[i].b);
    }
  }

  // Arcs of `circle` lying inside the region and inside `other`.
  double arc_contribution(const Disk& circle, const Disk& other) const {
    const Point c = circle.center;
    const double r = circle.radius;
    std::vector<double> angles;
    for (auto& s : segments_) {
      Point d = s.b - s.a, f = s.a - c;
      double A = dot(d, d), B = dot(f, d), C = dot(f, f) - r * r;
      if (A == 0) continue;
      double disc = B * B - A * C;
      if (disc < 0) continue;
      double sq = std::sqrt(disc);
      for (double t : {(-B - sq) / A, (-B + sq) / A}) {
        if (t < 0 || t > 1) continue;
        Point p = s.a + t * d - c;
        angles.push_back(std::atan2(p.y, p.x));
      }
    }
    double cd = dist(c, other.center);
    if (cd > 0 && cd < r + other.radius && cd > std::abs(r - other.radius)) {
      double base = std::atan2(other.center.y - c.y, other.center.x - c.x);
      double half = std::acos(std::clamp((cd * cd + r * r - other.radius * other.radius) / (2 * cd * r), -1.0, 1.0));
      angles.push_back(std::remainder(base - half, 2 * pi));
      angles.push_back(std::remainder(base + half, 2 * pi));
    }
    std::sort(angles.begin(), angles.end());
    if (angles.empty()) angles.push_back(-pi);
    double total = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
      double t0 = angles[i];
      double t1 = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + 2 * pi;
      if (t1 - t0 <= 0) continue;
      double tm = 0.5 * (t0 + t1);
      Point m{c.x + r * std::cos(tm), c.y + r * std::sin(tm)};
      if (dist(m, other.center) >= other.radius) continue;
      if (!contains(m)) continue;
      total += 0.5 * (r * r * (t1 - t0) + r * c.x * (std::sin(t1) - std::sin(t0)) -
                      r * c.y * (std::cos(t1) - std::cos(t0)));
    }
    return total;
  }

  std::vector<Segment> segments_;
  double area_ = 0.0;
  double perimeter_ = 0.0;
  BoundingBox bbox_;
};

struct RasterEstimate {
  double area = 0.0;
  double error_bound = 0.0;
  long cells = 0;
};

/// Adaptive quadtree estimate of |region ∩ B(center, radius)| with a rigorous
/// error bound (total area of cells left undecided at the finest level).
inline RasterEstimate disk_overlap_raster(const Region& region, Point center, double radius,
                                          double tolerance, long cell_budget = 4'000'000) {
  RasterEstimate out;
  if (radius <= 0 || region.empty()) return out;
  BoundingBox box = region.bbox();
  box.lo = {std::max(box.lo.x, center.x - radius), std::max(box.lo.y, center.y - radius)};
  box.hi = {std::min(box.hi.x, center.x + radius), std::min(box.hi.y, center.y + radius)};
  if (box.lo.x >= box.hi.x || box.lo.y >= box.hi.y) return out;
  double side = std::max(box.width(), box.height());
  double boundary = region.perimeter() + 2 * pi * radius;
  // Undecided cells straddle a boundary; their total area is about
  // boundary * cell_size * sqrt(2) at the finest level.
  double finest = tolerance / (4.0 * boundary);
  int max_depth = std::max(1, int(std::ceil(std::log2(side / finest))));

  auto segs = region.segments();
  std::vector<std::size_t> all(segs.size());
  for (std::size_t i = 0; i < segs.size(); ++i) all[i] = i;

  auto seg_hits_box = [&](const Segment& s, Point lo, Point hi) {
    if (std::max(s.a.x, s.b.x) < lo.x || std::min(s.a.x, s.b.x) > hi.x) return false;
    if (std::max(s.a.y, s.b.y) < lo.y || std::min(s.a.y, s.b.y) > hi.y) return false;
    Point c[4] = {lo, {hi.x, lo.y}, hi, {lo.x, hi.y}};
    int pos = 0, neg = 0;
    for (auto& q : c) {
      double o = orient(s.a, s.b, q);
      pos += o >= 0;
      neg += o <= 0;
    }
    return pos > 0 && neg > 0;
  };

  std::function<void(Point, double, const std::vector<std::size_t>&, int)> visit =
      [&](Point lo, double s, const std::vector<std::size_t>& cand, int depth) {
        if (++out.cells > cell_budget) return;
        Point hi{lo.x + s, lo.y + s};
        double nx = std::clamp(center.x, lo.x, hi.x) - center.x;
        double ny = std::clamp(center.y, lo.y, hi.y) - center.y;
        if (nx * nx + ny * ny >= radius * radius) return;
        double fx = std::max(std::abs(lo.x - center.x), std::abs(hi.x - center.x));
        double fy = std::max(std::abs(lo.y - center.y), std::abs(hi.y - center.y));
        bool disk_full = fx * fx + fy * fy <= radius * radius;
        std::vector<std::size_t> mine;
        for (auto i : cand)
          if (seg_hits_box(segs[i], lo, hi)) mine.push_back(i);
        Point mid{lo.x + 0.5 * s, lo.y + 0.5 * s};
        if (mine.empty()) {
          if (!region.contains(mid)) return;
          if (disk_full) {
            out.area += s * s;
            return;
          }
        }
        if (depth >= max_depth) {
          if (region.contains(mid) && dist(mid, center) < radius) out.area += s * s;
          out.error_bound += s * s;
          return;
        }
        double h = 0.5 * s;
        visit(lo, h, mine, depth + 1);
        visit({lo.x + h, lo.y}, h, mine, depth + 1);
        visit({lo.x, lo.y + h}, h, mine, depth + 1);
        visit({lo.x + h, lo.y + h}, h, mine, depth + 1);
      };
  visit(box.lo, side, all, 0);
  if (out.cells > cell_budget)
    throw Error(ErrorCode::tolerance_not_met, "raster overlap exceeded its cell budget");
  if (out.error_bound > tolerance)
    throw Error(ErrorCode::tolerance_not_met, "raster overlap error bound " +
                                                  std::to_string(out.error_bound) + " exceeds tolerance");
  return out;
}

/// Outer polygon minus pairwise disjoint holes compactly contained in it.
class Domain {
 public:
  Domain() = default;

  const Polygon& outer() const { return outer_; }
  std::span<const Polygon> holes() const { return holes_; }
  std::size_t hole_count() const { return holes_.size(); }
  double outer_area() const { return outer_area_; }
  double holes_area() const { return holes_area_; }
  double area() const { return outer_area_ - holes_area_; }

  /// Ω = G \ S as a region.
  Region region() const {
    std::vector<std::vector<Point>> rings;
    rings.emplace_back(outer_.vertices().begin(), outer_.vertices().end());
    for (auto& h : holes_) rings.emplace_back(h.vertices().rbegin(), h.vertices().rend());
    return Region::from_rings(rings);
  }

  Region outer_region() const { return Region::from_polygon(outer_); }

  /// S, the union of the holes.
  Region holes_region() const {
    std::vector<std::vector<Point>> rings;
    for (auto& h : holes_) rings.emplace_back(h.vertices().begin(), h.vertices().end());
    return Region::from_rings(rings);
  }

  Point holes_centroid() const {
    if (holes_.empty()) return outer_.centroid();
    double a = 0;
    Point c{};
    for (auto& h : holes_) {
      c = c + h.area() * h.centroid();
      a += h.area();
    }
    return (1.0 / a) * c;
  }

  /// Smallest boundary-to-boundary distance (outer-hole and hole-hole).
  double clearance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < holes_.size(); ++i) {
      d = std::min(d, holes_[i].boundary_distance(outer_));
      for (std::size_t j = i + 1; j < holes_.size(); ++j) d = std::min(d, holes_[i].boundary_distance(holes_[j]));
    }
    return d;
  }

  Domain transformed(const std::function<Point(Point)>& f) const {
    std::vector<Polygon> hs;
    for (auto& h : holes_) hs.push_back(h.transformed(f));
    return Domain(outer_.transformed(f), std::move(hs));
  }

  Domain scaled(double factor) const {
    return transformed([factor](Point p) { return factor * p; });
  }

  friend Domain validate_domain(Polygon outer, std::vector<Polygon> holes);

 private:
  Domain(Polygon outer, std::vector<Polygon> holes) : outer_(std::move(outer)), holes_(std::move(holes)) {
    outer_area_ = outer_.area();
    holes_area_ = 0;
    for (auto& h : holes_) holes_area_ += h.area();
  }

  Polygon outer_;
  std::vector<Polygon> holes_;
  double outer_area_ = 0.0;
  double holes_area_ = 0.0;
};

/// Checks that every hole closure lies strictly inside the outer polygon and
/// that hole closures are pairwise disjoint.
inline Domain validate_domain(Polygon outer, std::vector<Polygon> holes) {
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const Polygon& h = holes[i];
    for (auto p : h.vertices())
      if (!outer.contains(p))
        throw Error(ErrorCode::hole_outside, "hole " + std::to_string(i) + " has a vertex outside the outer polygon",
                    int(i));
    if (h.intersects_boundary(outer))
      throw Error(ErrorCode::hole_outside, "hole " + std::to_string(i) + " touches the outer boundary", int(i));
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (holes[i].intersects_boundary(holes[j]) || holes[i].contains(holes[j][0]) ||
          holes[j].contains(holes[i][0]))
        throw Error(ErrorCode::holes_overlap,
                    "holes " + std::to_string(i) + " and " + std::to_string(j) + " overlap", int(i));
    }
  }
  Domain d(std::move(outer), std::move(holes));
  if (!(d.holes_area() < d.outer_area()))
    throw Error(ErrorCode::hole_outside, "holes cover the outer domain");
  return d;
}

/// Same, starting from raw vertex lists; polygon errors carry the polygon
/// index (-1 for the outer boundary).
inline Domain validate_domain(const std::vector<Point>& outer, const std::vector<std::vector<Point>>& holes) {
  auto make = [](const std::vector<Point>& v, int index) {
    try {
      return Polygon(v);
    } catch (const Error& e) {
      std::string who = index < 0 ? "outer polygon" : "hole " + std::to_string(index);
      std::string what = e.what();
      what = what.substr(what.find(": ") + 2);
      throw Error(e.code(), who + ": " + what, index);
    }
  };
  Polygon o = make(outer, -1);
  std::vector<Polygon> hs;
  for (std::size_t i = 0; i < holes.size(); ++i) hs.push_back(make(holes[i], int(i)));
  return validate_domain(std::move(o), std::move(hs));
}

struct AsymmetryOptions {
  double tolerance = 1e-3;  // required certified tolerance on the value
  int starts = 4;           // local descents launched from the best grid cells
};

struct AsymmetryResult {
  double value = 0.0;
  Point center;         // optimal ball centre (outer ball for β)
  Point inner_center;   // β only: centre of the inner ball
  double certified_tolerance = 0.0;
};

namespace detail {

struct GridCandidate {
  Point p;
  double value;
};

// Minimises `objective` over centres: grid over `box` at `stride`, then
// Nelder-Mead from the best `starts` well-separated grid points plus `extra`.
template <class F>
std::pair<Point, NelderMeadResult> minimise_center(F&& objective, const BoundingBox& box, double stride,
                                                   int starts, std::span<const Point> extra, double x_tol) {
  std::vector<GridCandidate> grid;
  int nx = std::max(1, int(std::ceil(box.width() / stride))) + 1;
  int ny = std::max(1, int(std::ceil(box.height() / stride))) + 1;
  double sx = nx > 1 ? box.width() / (nx - 1) : 0.0;
  double sy = ny > 1 ? box.height() / (ny - 1) : 0.0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Point p{box.lo.x + i * sx, box.lo.y + j * sy};
      grid.push_back({p, objective(p)});
    }
  std::stable_sort(grid.begin(), grid.end(), [](const GridCandidate& a, const GridCandidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.p < b.p;
  });
  std::vector<Point> seeds(extra.begin(), extra.end());
  int taken = 0;
  for (auto& g : grid) {
    if (taken >= starts) break;
    bool far = true;
    for (auto& s : seeds)
      if (dist(s, g.p) < 2 * stride) far = false;
    if (!far) continue;
    seeds.push_back(g.p);
    ++taken;
  }
  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  Point best_p{};
  for (auto& s : seeds) {
    auto r = nelder_mead([&](const std::vector<double>& x) { return objective(Point{x[0], x[1]}); },
                         {s.x, s.y}, 0.5 * stride, x_tol);
    Point p{r.x[0], r.x[1]};
    if (r.value < best.value || (r.value == best.value && p < best_p)) {
      best = r;
      best_p = p;
    }
  }
  return {best_p, best};
}

}  // namespace detail

/// Fraenkel asymmetry: min over centres of |r △ B| / |B| with |B| = |r|.
inline AsymmetryResult fraenkel_asymmetry(const Region& r, const AsymmetryOptions& opt = {}) {
  const double area = r.area();
  if (!(area > 0)) throw Error(ErrorCode::invalid_argument, "fraenkel asymmetry needs positive area");
  const double rho = radius_of_area(area);
  const double stride = rho / 8;
  auto objective = [&](Point c) { return -r.disk_overlap(c, rho); };
  Point centroid = r.centroid();
  auto [center, res] = detail::minimise_center(objective, r.bbox(), stride, opt.starts,
                                               std::span<const Point>(&centroid, 1), 1e-4 * rho);
  double overlap = -res.value;
  AsymmetryResult out;
  out.value = std::clamp(2.0 * (1.0 - overlap / area), 0.0, 2.0);
  out.center = center;
  out.inner_center = center;
  // |∇ overlap| <= 2 rho (projected chord), hence |∇ alpha| <= 4 / (pi rho).
  out.certified_tolerance = 4.0 / (pi * rho) * std::sqrt(2.0) * res.simplex_diameter + 1e-12;
  if (out.certified_tolerance > opt.tolerance)
    throw Error(ErrorCode::tolerance_not_met, "fraenkel asymmetry did not reach the requested tolerance");
  return out;
}

enum class AnnulusCentres { common, independent };

/// Annular asymmetry: inf |Ω △ (B1 \ B2)| over balls with |B1| = |G| and
/// |B2| = |S|. Unnormalised (area units). With `common` centres the
/// candidates are genuine annuli; `independent` lets the two centres move
/// separately and does not force B2 ⊂ B1.
inline AsymmetryResult annular_asymmetry(const Domain& d, const AsymmetryOptions& opt = {},
                                         AnnulusCentres mode = AnnulusCentres::common) {
  const Region omega = d.region();
  const double omega_area = omega.area();
  const double G = d.outer_area();
  const double S = d.holes_area();
  const double r1 = radius_of_area(G);
  const double r2 = radius_of_area(S);
  const double stride = r1 / 8;
  const double x_tol = 1e-4 * r1;

  auto concentric = [&](Point c) {
    double inter = omega.disk_overlap(c, r1) - (r2 > 0 ? omega.disk_overlap(c, r2) : 0.0);
    return omega_area + (G - S) - 2.0 * inter;
  };
  std::vector<Point> seeds{d.outer().centroid()};
  if (d.hole_count() > 0) seeds.push_back(d.holes_centroid());
  auto [c, res] = detail::minimise_center(concentric, d.outer().bbox(), stride, opt.starts, seeds, x_tol);

  AsymmetryResult out;
  out.value = std::max(res.value, 0.0);
  out.center = c;
  out.inner_center = c;
  double lipschitz = 4.0 * (r1 + r2);
  out.certified_tolerance = lipschitz * std::sqrt(2.0) * res.simplex_diameter / G + 1e-12;

  if (mode == AnnulusCentres::independent && r2 > 0) {
    auto general = [&](const std::vector<double>& x) {
      Disk b1{{x[0], x[1]}, r1}, b2{{x[2], x[3]}, r2};
      double a_area = disk_area(r1) - lens_area(r1, r2, dist(b1.center, b2.center));
      double inter = omega.disk_overlap(b1.center, r1) - omega.two_disk_overlap(b1, b2);
      return omega_area + a_area - 2.0 * inter;
    };
    Point cg = d.outer().centroid(), cs = d.holes_centroid();
    std::vector<std::vector<double>> starts{{c.x, c.y, c.x, c.y}, {cg.x, cg.y, cs.x, cs.y}};
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (auto& s : starts) {
      auto r = nelder_mead(general, s, 0.5 * stride, x_tol, 8000);
      if (r.value < best.value) best = r;
    }
    if (best.value < out.value) {
      out.value = std::max(best.value, 0.0);
      out.center = {best.x[0], best.x[1]};
      out.inner_center = {best.x[2], best.x[3]};
      out.certified_tolerance = lipschitz * 2.0 * best.simplex_diameter / G + 1e-12;
    }
  }
  if (out.certified_tolerance > opt.tolerance)
    throw Error(ErrorCode::tolerance_not_met, "annular asymmetry did not reach the requested tolerance");
  return out;
}

enum class FamilyKind { offset_hole_annulus, elliptic_outer, square_with_square_hole, multi_hole };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::offset_hole_annulus: return "offset_hole_annulus";
    case FamilyKind::elliptic_outer: return "elliptic_outer";
    case FamilyKind::square_with_square_hole: return "square_with_square_hole";
    case FamilyKind::multi_hole: return "multi_hole";
  }
  return "unknown";
}

inline FamilyKind family_from_string(const std::string& s) {
  for (auto k : {FamilyKind::offset_hole_annulus, FamilyKind::elliptic_outer, FamilyKind::square_with_square_hole,
                 FamilyKind::multi_hole})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::invalid_family_params, "unknown family '" + s + "'");
}

/// Test families. Parameters:
///   offset_hole_annulus     R1, r2, d        (hole centred at (d, 0))
///   elliptic_outer          a, b, r2         (ellipse semi-axes, centred hole)
///   square_with_square_hole L, l, d          (hole centred at (d, 0))
///   multi_hole              R1, then (r, cx, cy) per hole
/// Curves are regular k-gons inscribed in the nominal curve.
inline Domain domain_family(FamilyKind kind, std::span<const double> p, int k = 256) {
  auto bad = [&](const std::string& why) { return Error(ErrorCode::invalid_family_params, why); };
  auto need = [&](std::size_t n) {
    if (p.size() != n) throw bad(std::string(to_string(kind)) + " takes " + std::to_string(n) + " parameters");
  };
  if (k < 3) throw bad("vertex count must be at least 3");
  for (double v : p)
    if (!std::isfinite(v)) throw bad("non-finite parameter");
  switch (kind) {
    case FamilyKind::offset_hole_annulus: {
      need(3);
      double R1 = p[0], r2 = p[1], d = p[2];
      if (!(R1 > 0 && r2 > 0 && d >= 0)) throw bad("radii must be positive and offset non-negative");
      if (!(d + r2 < R1)) throw bad("hole would touch the outer boundary (d + r2 >= R1)");
      return validate_domain(Polygon::regular(k, R1), {Polygon::regular(k, r2, {d, 0.0})});
    }
    case FamilyKind::elliptic_outer: {
      need(3);
      double a = p[0], b = p[1], r2 = p[2];
      if (!(a > 0 && b > 0 && r2 > 0)) throw bad("semi-axes and hole radius must be positive");
      if (!(r2 < std::min(a, b))) throw bad("hole would touch the outer boundary (r2 >= min(a, b))");
      std::vector<Point> v;
      for (int j = 0; j < k; ++j) {
        double t = 2.0 * pi * j / k;
        v.push_back({a * std::cos(t), b * std::sin(t)});
      }
      return validate_domain(Polygon(std::move(v)), {Polygon::regular(k, r2)});
    }
    case FamilyKind::square_with_square_hole: {
      need(3);
      double L = p[0], l = p[1], d = p[2];
      if (!(L > 0 && l > 0 && d >= 0)) throw bad("sides must be positive and offset non-negative");
      if (!(d + l / 2 < L / 2)) throw bad("hole would touch the outer boundary (d + l/2 >= L/2)");
      auto square = [](double side, Point c) {
        double h = side / 2;
        return Polygon({{c.x - h, c.y - h}, {c.x + h, c.y - h}, {c.x + h, c.y + h}, {c.x - h, c.y + h}});
      };
      return validate_domain(square(L, {}), {square(l, {d, 0.0})});
    }
    case FamilyKind::multi_hole: {
      if (p.empty() || (p.size() - 1) % 3 != 0) throw bad("multi_hole takes R1 followed by (r, cx, cy) triples");
      double R1 = p[0];
      if (!(R1 > 0)) throw bad("outer radius must be positive");
      std::vector<Polygon> holes;
      std::size_t m = (p.size() - 1) / 3;
      for (std::size_t i = 0; i < m; ++i) {
        double r = p[1 + 3 * i];
        Point c{p[2 + 3 * i], p[3 + 3 * i]};
        if (!(r > 0)) throw bad("hole radius must be positive");
        if (!(norm(c) + r < R1)) throw bad("hole " + std::to_string(i) + " would touch the outer boundary");
        for (std::size_t j = 0; j < i; ++j) {
          Point cj{p[2 + 3 * j], p[3 + 3 * j]};
          if (!(dist(c, cj) > r + p[1 + 3 * j]))
            throw bad("holes " + std::to_string(j) + " and " + std::to_string(i) + " would overlap");
        }
        holes.push_back(Polygon::regular(k, r, c));
      }
      return validate_domain(Polygon::regular(k, R1), std::move(holes));
    }
  }
  throw bad("unknown family");
}

inline Domain domain_family(FamilyKind kind, std::initializer_list<double> p, int k = 256) {
  std::vector<double> v(p);
  return domain_family(kind, std::span<const double>(v), k);
}

}  // namespace torsionlab
