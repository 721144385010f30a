#pragma once

// Conforming Delaunay triangulation of the filled outer domain G with the
// hole polygons as internal segments (Ruppert refinement). Triangles inside
// the holes are kept separately: the solver ignores them, the level-set code
// uses them to integrate the constant extension of the solution.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/geometry.hpp"

namespace torsionlab {

enum class NodeKind { interior, outer, hole, hole_interior };

struct NodeTag {
  NodeKind kind = NodeKind::interior;
  int hole = -1;  // hole index for `hole` and `hole_interior`
};

using Triangle = std::array<int, 3>;

struct Mesh {
  std::vector<Point> nodes;
  std::vector<NodeTag> tags;
  std::vector<Triangle> triangles;       // Ω
  std::vector<Triangle> hole_triangles;  // inside the holes
  std::vector<int> hole_of;              // hole index per hole triangle
  int hole_count = 0;
  double h = 0.0;                        // longest edge

  double triangle_area(const Triangle& t) const {
    return 0.5 * orient(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
  }

  double area() const {
    double a = 0;
    for (auto& t : triangles) a += triangle_area(t);
    return a;
  }

  double hole_area(int i) const {
    double a = 0;
    for (std::size_t k = 0; k < hole_triangles.size(); ++k)
      if (hole_of[k] == i) a += triangle_area(hole_triangles[k]);
    return a;
  }
};

namespace detail {

inline long double orient_l(Point a, Point b, Point c) {
  return ((long double)b.x - a.x) * ((long double)c.y - a.y) - ((long double)b.y - a.y) * ((long double)c.x - a.x);
}

// > 0 iff d lies strictly inside the circumcircle of the ccw triangle abc.
inline long double incircle_l(Point a, Point b, Point c, Point d) {
  long double adx = (long double)a.x - d.x, ady = (long double)a.y - d.y;
  long double bdx = (long double)b.x - d.x, bdy = (long double)b.y - d.y;
  long double cdx = (long double)c.x - d.x, cdy = (long double)c.y - d.y;
  long double ad = adx * adx + ady * ady, bd = bdx * bdx + bdy * bdy, cd = cdx * cdx + cdy * cdy;
  return ad * (bdx * cdy - cdx * bdy) + bd * (cdx * ady - adx * cdy) + cd * (adx * bdy - bdx * ady);
}

inline Point circumcenter(Point a, Point b, Point c) {
  long double bx = (long double)b.x - a.x, by = (long double)b.y - a.y;
  long double cx = (long double)c.x - a.x, cy = (long double)c.y - a.y;
  long double d = 2 * (bx * cy - by * cx);
  long double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  return {double(a.x + (cy * b2 - by * c2) / d), double(a.y + (bx * c2 - cx * b2) / d)};
}

inline double min_angle_deg(Point a, Point b, Point c) {
  double la = dist(b, c), lb = dist(a, c), lc = dist(a, b);
  auto ang = [](double opp, double s1, double s2) {
    return std::acos(std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2 * s1 * s2), -1.0, 1.0));
  };
  return std::min({ang(la, lb, lc), ang(lb, la, lc), ang(lc, la, lb)}) * 180.0 / pi;
}

inline double longest_edge(Point a, Point b, Point c) { return std::max({dist(a, b), dist(b, c), dist(c, a)}); }

class DelaunayRefiner {
 public:
  struct Tri {
    std::array<int, 3> v;
    std::array<int, 3> nb;  // nb[i] is across the edge opposite v[i]
    bool alive = true;
  };
  struct Subsegment {
    int a, b;
    int owner;  // -1 outer, k >= 0 hole k
    bool alive = true;
  };

  DelaunayRefiner(const Domain& d, double h, double min_angle) : domain_(d), h_(h), min_angle_(min_angle) {
    BoundingBox box = d.outer().bbox();
    Point c{0.5 * (box.lo.x + box.hi.x), 0.5 * (box.lo.y + box.hi.y)};
    double s = std::max(box.width(), box.height()) * 20.0;
    pts_ = {{c.x - 2 * s, c.y - s}, {c.x + 2 * s, c.y - s}, {c.x, c.y + 2 * s}};
    owner_ = {-2, -2, -2};
    tris_.push_back({{0, 1, 2}, {-1, -1, -1}, true});
    vtri_ = {0, 0, 0};

    struct Input {
      Point p;
      int owner;
    };
    std::vector<Input> input;
    std::vector<std::vector<int>> rings;
    auto add_ring = [&](const Polygon& poly, int owner) {
      std::vector<int> ids;
      for (auto p : poly.vertices()) {
        ids.push_back(int(input.size()));
        input.push_back({p, owner});
      }
      rings.push_back(ids);
    };
    add_ring(d.outer(), -1);
    for (std::size_t i = 0; i < d.hole_count(); ++i) add_ring(d.holes()[i], int(i));

    // Deterministic insertion order: lexicographic in the coordinates.
    std::vector<int> order(input.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return input[a].p < input[b].p; });
    std::vector<int> vid(input.size());
    for (int i : order) vid[i] = insert_point(input[i].p, input[i].owner, last_);
    for (auto& ring : rings)
      for (std::size_t k = 0; k < ring.size(); ++k) {
        int a = vid[ring[k]], b = vid[ring[(k + 1) % ring.size()]];
        segs_.push_back({a, b, input[ring[k]].owner});
      }
  }

  void run() {
    const std::size_t cap = 200 * std::size_t(domain_.outer_area() / (h_ * h_) + 1000);
    while (true) {
      split_segments();
      if (!refine_triangles()) break;
      if (pts_.size() > cap) throw Error(ErrorCode::not_converged, "mesh refinement did not terminate");
    }
  }

  Mesh extract() const {
    Mesh m;
    m.hole_count = int(domain_.hole_count());
    std::vector<int> map(pts_.size(), -1);
    std::vector<char> in_omega(pts_.size(), 0), in_hole(pts_.size(), 0);
    std::vector<std::pair<Triangle, int>> kept;  // (vertices, -1 for Ω or hole index)
    for (auto& t : tris_) {
      if (!t.alive || t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) continue;
      Point c = (1.0 / 3.0) * (pts_[t.v[0]] + pts_[t.v[1]] + pts_[t.v[2]]);
      if (!domain_.outer().contains(c)) continue;
      int hole = -1;
      for (std::size_t i = 0; i < domain_.hole_count(); ++i)
        if (domain_.holes()[i].contains(c)) hole = int(i);
      kept.push_back({{t.v[0], t.v[1], t.v[2]}, hole});
      for (int v : t.v) (hole < 0 ? in_omega : in_hole)[v] = 1;
    }
    for (std::size_t i = 3; i < pts_.size(); ++i) {
      if (!in_omega[i] && !in_hole[i]) continue;
      map[i] = int(m.nodes.size());
      m.nodes.push_back(pts_[i]);
      NodeTag tag;
      if (owner_[i] == -1) {
        tag.kind = NodeKind::outer;
      } else if (owner_[i] >= 0) {
        tag = {NodeKind::hole, owner_[i]};
      } else if (!in_omega[i]) {
        tag.kind = NodeKind::hole_interior;
      }
      m.tags.push_back(tag);
    }
    for (auto& [tv, hole] : kept) {
      Triangle t{map[tv[0]], map[tv[1]], map[tv[2]]};
      if (hole < 0) {
        m.triangles.push_back(t);
      } else {
        m.hole_triangles.push_back(t);
        m.hole_of.push_back(hole);
      }
    }
    // Hole-interior nodes learn their hole from any hole triangle using them.
    for (std::size_t k = 0; k < m.hole_triangles.size(); ++k)
      for (int v : m.hole_triangles[k])
        if (m.tags[v].kind == NodeKind::hole_interior) m.tags[v].hole = m.hole_of[k];
    double h = 0;
    for (auto& t : m.triangles) h = std::max(h, longest_edge(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]));
    for (auto& t : m.hole_triangles) h = std::max(h, longest_edge(m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]));
    m.h = h;
    return m;
  }

 private:
  Point P(int i) const { return pts_[i]; }

  int new_tri(std::array<int, 3> v, std::array<int, 3> nb) {
    int id;
    if (!free_.empty()) {
      id = free_.back();
      free_.pop_back();
      tris_[id] = {v, nb, true};
    } else {
      id = int(tris_.size());
      tris_.push_back({v, nb, true});
    }
    created_.push_back(id);
    return id;
  }

  int locate(Point p, int hint) const {
    int t = (hint >= 0 && hint < int(tris_.size()) && tris_[hint].alive) ? hint : -1;
    if (t < 0)
      for (std::size_t i = 0; i < tris_.size(); ++i)
        if (tris_[i].alive) {
          t = int(i);
          break;
        }
    const std::size_t max_steps = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < max_steps; ++step) {
      const Tri& T = tris_[t];
      bool moved = false;
      for (int i = 0; i < 3; ++i) {
        int a = T.v[(i + 1) % 3], b = T.v[(i + 2) % 3];
        if (orient_l(P(a), P(b), p) < 0) {
          if (T.nb[i] < 0) throw Error(ErrorCode::invalid_argument, "point outside the triangulation");
          t = T.nb[i];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const Tri& T = tris_[i];
      if (!T.alive) continue;
      if (orient_l(P(T.v[0]), P(T.v[1]), p) >= 0 && orient_l(P(T.v[1]), P(T.v[2]), p) >= 0 &&
          orient_l(P(T.v[2]), P(T.v[0]), p) >= 0)
        return int(i);
    }
    throw Error(ErrorCode::invalid_argument, "point location failed");
  }

  struct Cavity {
    std::vector<int> tris;
    struct Edge {
      int a, b, outside;
    };
    std::vector<Edge> boundary;
  };

  Cavity cavity_of(Point p, int hint) {
    ++stamp_;
    if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
    Cavity cav;
    int start = locate(p, hint);
    std::vector<int> stack{start};
    mark_[start] = stamp_;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      cav.tris.push_back(t);
      for (int i = 0; i < 3; ++i) {
        int n = tris_[t].nb[i];
        if (n < 0 || mark_[n] == stamp_) continue;
        const Tri& N = tris_[n];
        if (incircle_l(P(N.v[0]), P(N.v[1]), P(N.v[2]), p) > 0) {
          mark_[n] = stamp_;
          stack.push_back(n);
        }
      }
    }
    // Star-shape repair: every boundary edge must see p strictly on its left.
    while (true) {
      cav.boundary.clear();
      int grow = -1;
      for (int t : cav.tris) {
        for (int i = 0; i < 3; ++i) {
          int n = tris_[t].nb[i];
          if (n >= 0 && mark_[n] == stamp_) continue;
          int a = tris_[t].v[(i + 1) % 3], b = tris_[t].v[(i + 2) % 3];
          if (orient_l(P(a), P(b), p) <= 0 && n >= 0) grow = n;
          cav.boundary.push_back({a, b, n});
        }
      }
      if (grow < 0) break;
      mark_[grow] = stamp_;
      cav.tris.push_back(grow);
    }
    return cav;
  }

  int insert_with_cavity(Point p, int owner, const Cavity& cav) {
    int pid = int(pts_.size());
    pts_.push_back(p);
    owner_.push_back(owner);
    vtri_.push_back(-1);
    std::map<int, int> by_start, by_end;
    std::vector<int> fresh;
    for (auto& e : cav.boundary) {
      int t = new_tri({e.a, e.b, pid}, {-1, -1, e.outside});
      fresh.push_back(t);
      by_start[e.a] = t;
      by_end[e.b] = t;
      if (e.outside >= 0) {
        Tri& O = tris_[e.outside];
        for (int i = 0; i < 3; ++i)
          if (O.v[(i + 1) % 3] == e.b && O.v[(i + 2) % 3] == e.a) O.nb[i] = t;
      }
    }
    for (int t : fresh) {
      Tri& T = tris_[t];
      T.nb[0] = by_start.at(T.v[1]);  // edge b -> p
      T.nb[1] = by_end.at(T.v[0]);    // edge p -> a
      vtri_[T.v[0]] = t;
      vtri_[T.v[1]] = t;
    }
    vtri_[pid] = fresh.front();
    for (int t : cav.tris) {
      tris_[t].alive = false;
      free_.push_back(t);
    }
    last_ = fresh.front();
    return pid;
  }

  int insert_point(Point p, int owner, int hint) {
    Cavity cav = cavity_of(p, hint);
    return insert_with_cavity(p, owner, cav);
  }

  // Triangle holding the directed edge a -> b, or -1.
  int find_directed(int a, int b) const {
    int t0 = vtri_[a];
    if (t0 < 0) return -1;
    int t = t0;
    for (std::size_t guard = 0; guard < tris_.size(); ++guard) {
      const Tri& T = tris_[t];
      int i = T.v[0] == a ? 0 : T.v[1] == a ? 1 : 2;
      if (T.v[(i + 1) % 3] == b) return t;
      t = T.nb[(i + 2) % 3];
      if (t < 0 || t == t0) break;
    }
    t = t0;
    for (std::size_t guard = 0; guard < tris_.size(); ++guard) {
      const Tri& T = tris_[t];
      int i = T.v[0] == a ? 0 : T.v[1] == a ? 1 : 2;
      if (T.v[(i + 1) % 3] == b) return t;
      t = T.nb[(i + 1) % 3];
      if (t < 0 || t == t0) break;
    }
    return -1;
  }

  int apex(int t, int a, int b) const {
    for (int v : tris_[t].v)
      if (v != a && v != b) return v;
    return -1;
  }

  bool encroached_by(const Subsegment& s, Point c) const {
    return dot(P(s.a) - c, P(s.b) - c) < 0;
  }

  bool needs_split(const Subsegment& s) const {
    if (dist(P(s.a), P(s.b)) > h_) return true;
    int t1 = find_directed(s.a, s.b), t2 = find_directed(s.b, s.a);
    if (t1 < 0 || t2 < 0) return true;  // not (yet) an edge of the triangulation
    for (int t : {t1, t2}) {
      int c = apex(t, s.a, s.b);
      if (c >= 3 && encroached_by(s, P(c))) return true;
    }
    return false;
  }

  void split(std::size_t k) {
    Subsegment s = segs_[k];
    segs_[k].alive = false;
    Point m = 0.5 * (P(s.a) + P(s.b));
    int hint = vtri_[s.a];
    int id = insert_point(m, s.owner, hint);
    segs_.push_back({s.a, id, s.owner});
    segs_.push_back({id, s.b, s.owner});
  }

  void split_segments() {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t k = 0; k < segs_.size(); ++k) {
        if (!segs_[k].alive || !needs_split(segs_[k])) continue;
        split(k);
        again = true;
      }
    }
  }

  bool near_domain(Point c) const {
    BoundingBox box = domain_.outer().bbox();
    double pad = box.diameter();
    return c.x > box.lo.x - pad && c.x < box.hi.x + pad && c.y > box.lo.y - pad && c.y < box.hi.y + pad;
  }

  bool inside_domain(const Tri& t) const {
    if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) return false;
    Point c = (1.0 / 3.0) * (P(t.v[0]) + P(t.v[1]) + P(t.v[2]));
    return domain_.outer().contains(c);
  }

  bool is_bad(const Tri& t) const {
    Point a = P(t.v[0]), b = P(t.v[1]), c = P(t.v[2]);
    return longest_edge(a, b, c) > h_ || min_angle_deg(a, b, c) < min_angle_;
  }

  // One sweep of circumcentre insertion; returns true if anything changed.
  bool refine_triangles() {
    std::deque<std::pair<int, std::array<int, 3>>> queue;
    auto enqueue = [&](int t) {
      const Tri& T = tris_[t];
      if (T.alive && inside_domain(T) && is_bad(T)) queue.push_back({t, T.v});
    };
    for (std::size_t t = 0; t < tris_.size(); ++t) enqueue(int(t));
    std::vector<std::array<int, 3>> skipped;
    bool changed = false;
    while (!queue.empty()) {
      auto [t, verts] = queue.front();
      queue.pop_front();
      const Tri& T = tris_[t];
      if (!T.alive || T.v != verts || !is_bad(T)) continue;
      Point c = circumcenter(P(T.v[0]), P(T.v[1]), P(T.v[2]));
      if (!std::isfinite(c.x) || !std::isfinite(c.y) || !near_domain(c)) continue;
      Cavity cav = cavity_of(c, t);
      std::vector<std::size_t> hit;
      for (int ct : cav.tris)
        for (int i = 0; i < 3; ++i) {
          int a = tris_[ct].v[(i + 1) % 3], b = tris_[ct].v[(i + 2) % 3];
          auto it = seg_index().find(key(a, b));
          if (it != seg_index().end() && encroached_by(segs_[it->second], c)) hit.push_back(it->second);
        }
      std::sort(hit.begin(), hit.end());
      hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
      created_.clear();
      if (!hit.empty()) {
        for (auto k : hit)
          if (segs_[k].alive) split(k);
        invalidate_index();
        split_segments();
        invalidate_index();
        changed = true;
      } else if (!domain_.outer().contains(c)) {
        continue;  // cannot happen for an unencroached boundary; skip defensively
      } else {
        insert_with_cavity(c, -2, cav);
        changed = true;
      }
      for (int nt : created_) enqueue(nt);
      if (tris_[t].alive && tris_[t].v == verts) queue.push_back({t, verts});
      if (pts_.size() > 200 * std::size_t(domain_.outer_area() / (h_ * h_) + 1000))
        throw Error(ErrorCode::not_converged, "mesh refinement did not terminate");
    }
    return changed;
  }

  static std::uint64_t key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b);
  }

  const std::map<std::uint64_t, std::size_t>& seg_index() {
    if (!index_valid_) {
      index_.clear();
      for (std::size_t k = 0; k < segs_.size(); ++k)
        if (segs_[k].alive) index_[key(segs_[k].a, segs_[k].b)] = k;
      index_valid_ = true;
    }
    return index_;
  }
  void invalidate_index() { index_valid_ = false; }

  const Domain& domain_;
  double h_;
  double min_angle_;
  std::vector<Point> pts_;
  std::vector<int> owner_;  // -2 free, -1 outer boundary, k hole k boundary
  std::vector<Tri> tris_;
  std::vector<int> vtri_;
  std::vector<int> free_;
  std::vector<int> created_;
  std::vector<Subsegment> segs_;
  std::vector<int> mark_;
  int stamp_ = 0;
  int last_ = 0;
  std::map<std::uint64_t, std::size_t> index_;
  bool index_valid_ = false;
};

}  // namespace detail

struct MeshOptions {
  double min_angle_deg = 20.0;
};

/// Quality conforming triangulation of G with every polygon edge of the
/// domain represented as a union of mesh edges. Throws `feature_too_small`
/// when the narrowest gap between boundary components is below 4 h.
inline Mesh triangulate(const Domain& d, double h, const MeshOptions& opt = {}) {
  if (!(h > 0) || !std::isfinite(h)) throw Error(ErrorCode::invalid_argument, "mesh size must be positive");
  double clearance = d.clearance();
  if (clearance < 4 * h)
    throw Error(ErrorCode::feature_too_small, "boundary clearance " + std::to_string(clearance) +
                                                  " is below 4h = " + std::to_string(4 * h));
  detail::DelaunayRefiner r(d, h, opt.min_angle_deg);
  r.run();
  return r.extract();
}

/// Uniform red refinement: every triangle splits into four similar ones.
inline Mesh refine(const Mesh& m) {
  Mesh out;
  out.hole_count = m.hole_count;
  out.nodes = m.nodes;
  out.tags = m.tags;

  // Edge classification from adjacency: how many Ω / hole triangles touch it.
  struct EdgeInfo {
    int omega = 0;
    int hole = 0;
    int hole_index = -1;
    int mid = -1;
  };
  std::map<std::pair<int, int>, EdgeInfo> edges;
  auto ekey = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (auto& t : m.triangles)
    for (int i = 0; i < 3; ++i) edges[ekey(t[i], t[(i + 1) % 3])].omega++;
  for (std::size_t k = 0; k < m.hole_triangles.size(); ++k)
    for (int i = 0; i < 3; ++i) {
      auto& e = edges[ekey(m.hole_triangles[k][i], m.hole_triangles[k][(i + 1) % 3])];
      e.hole++;
      e.hole_index = m.hole_of[k];
    }
  for (auto& [k, e] : edges) {
    e.mid = int(out.nodes.size());
    out.nodes.push_back(0.5 * (m.nodes[k.first] + m.nodes[k.second]));
    NodeTag tag;
    if (e.omega == 1 && e.hole == 1) {
      tag = {NodeKind::hole, e.hole_index};
    } else if (e.omega + e.hole == 1) {
      tag.kind = NodeKind::outer;
    } else if (e.omega == 0) {
      tag = {NodeKind::hole_interior, e.hole_index};
    }
    out.tags.push_back(tag);
  }
  auto children = [&](const Triangle& t, auto&& emit) {
    int a = t[0], b = t[1], c = t[2];
    int ab = edges.at(ekey(a, b)).mid, bc = edges.at(ekey(b, c)).mid, ca = edges.at(ekey(c, a)).mid;
    emit(Triangle{a, ab, ca});
    emit(Triangle{ab, b, bc});
    emit(Triangle{ca, bc, c});
    emit(Triangle{ab, bc, ca});
  };
  for (auto& t : m.triangles) children(t, [&](Triangle c) { out.triangles.push_back(c); });
  for (std::size_t k = 0; k < m.hole_triangles.size(); ++k)
    children(m.hole_triangles[k], [&](Triangle c) {
      out.hole_triangles.push_back(c);
      out.hole_of.push_back(m.hole_of[k]);
    });
  out.h = 0.5 * m.h;
  return out;
}

struct MeshQuality {
  double min_angle_deg = 0.0;
  double max_aspect_ratio = 0.0;  // 1 for equilateral
  double h = 0.0;
  std::size_t triangle_count = 0;
  bool valid = true;
  std::vector<std::string> violations;
};

inline MeshQuality mesh_quality(const Mesh& m) {
  MeshQuality q;
  q.min_angle_deg = 180.0;
  q.triangle_count = m.triangles.size();
  double h = 0;
  auto visit = [&](const Triangle& t, std::size_t k, const char* what) {
    Point a = m.nodes[t[0]], b = m.nodes[t[1]], c = m.nodes[t[2]];
    double area = 0.5 * orient(a, b, c);
    double le = detail::longest_edge(a, b, c);
    h = std::max(h, le);
    double ref = std::max(m.h, le);
    if (!(area > 1e-14 * ref * ref)) {
      q.valid = false;
      q.violations.push_back(std::string(what) + " triangle " + std::to_string(k) + " is degenerate or inverted");
      return;
    }
    q.min_angle_deg = std::min(q.min_angle_deg, detail::min_angle_deg(a, b, c));
    double perim = dist(a, b) + dist(b, c) + dist(c, a);
    q.max_aspect_ratio = std::max(q.max_aspect_ratio, le * perim / (4.0 * std::sqrt(3.0) * area));
  };
  for (std::size_t k = 0; k < m.triangles.size(); ++k) visit(m.triangles[k], k, "domain");
  for (std::size_t k = 0; k < m.hole_triangles.size(); ++k) visit(m.hole_triangles[k], k, "hole");
  q.h = h;
  if (m.tags.size() != m.nodes.size()) {
    q.valid = false;
    q.violations.push_back("tag count does not match node count");
  }
  std::vector<int> per_hole(std::max(m.hole_count, 0), 0);
  for (auto& t : m.tags)
    if (t.kind == NodeKind::hole && t.hole >= 0 && t.hole < m.hole_count) per_hole[t.hole]++;
  for (int i = 0; i < m.hole_count; ++i)
    if (per_hole[i] < 3) {
      q.valid = false;
      q.violations.push_back("hole " + std::to_string(i) + " has fewer than 3 boundary nodes");
    }
  return q;
}

}  // namespace torsionlab
