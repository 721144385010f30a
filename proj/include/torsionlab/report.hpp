#pragma once

// Serialisation of domains and reports: JSON (nlohmann), RFC-4180 CSV and a
// minimal SVG writer. Numbers are written in shortest round-trip form so the
// same run always produces the same bytes.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "torsionlab/bounds.hpp"
#include "torsionlab/errors.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/rearrange.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

using Json = nlohmann::ordered_json;

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- domains ----------------------------------------------------------------

namespace detail {

inline std::vector<Point> ring_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::schema_violation, where + " must be an array of [x, y] pairs");
  std::vector<Point> ring;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw Error(ErrorCode::schema_violation, where + "[" + std::to_string(i) + "] must be a pair of numbers");
    ring.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return ring;
}

}  // namespace detail

/// {"outer": [[x,y],...], "holes": [[[x,y],...],...]}; orientation is
/// normalised by the polygon constructor.
inline Domain domain_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::schema_violation, "domain must be a JSON object");
  if (!j.contains("outer")) throw Error(ErrorCode::schema_violation, "missing required key 'outer'");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "outer" && it.key() != "holes")
      throw Error(ErrorCode::schema_violation, "unknown key '" + it.key() + "'");
  auto outer = detail::ring_from_json(j["outer"], "outer");
  std::vector<std::vector<Point>> holes;
  if (j.contains("holes")) {
    if (!j["holes"].is_array()) throw Error(ErrorCode::schema_violation, "'holes' must be an array of rings");
    for (std::size_t i = 0; i < j["holes"].size(); ++i)
      holes.push_back(detail::ring_from_json(j["holes"][i], "holes[" + std::to_string(i) + "]"));
  }
  return validate_domain(std::move(outer), std::move(holes));
}

inline Domain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::schema_violation, "cannot open domain file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::schema_violation, std::string("malformed JSON: ") + e.what());
  }
  return domain_from_json(j);
}

inline Json domain_to_json(const Domain& d) {
  auto ring = [](const Polygon& p) {
    Json r = Json::array();
    for (auto v : p.vertices()) r.push_back({v.x, v.y});
    return r;
  };
  Json j;
  j["outer"] = ring(d.outer());
  j["holes"] = Json::array();
  for (auto& h : d.holes()) j["holes"].push_back(ring(h));
  return j;
}

// ---- records ---------------------------------------------------------------

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json solution_to_json(const TorsionSolution& s) {
  Json j;
  j["T"] = s.T;
  j["c"] = s.hole_constants;
  j["ndof"] = s.ndof;
  j["h"] = s.h;
  j["residual"] = s.residual_norm;
  j["iterations"] = s.iterations;
  return j;
}

inline Json to_json(const BoundRecord& b) {
  Json j;
  j["name"] = b.name;
  j["lhs"] = number_or_null(b.lhs);
  j["rhs"] = number_or_null(b.rhs);
  j["slack"] = number_or_null(b.slack);
  j["satisfied"] = b.satisfied;
  j["hard"] = b.hard;
  j["applicable"] = b.applicable;
  return j;
}

inline Json to_json(const DeficitReport& r) {
  Json j;
  j["G"] = r.G;
  j["S"] = r.S;
  j["holes"] = r.holes;
  j["h"] = r.h;
  j["T_opt"] = r.T_opt;
  j["T"] = r.T;
  j["T_coarse"] = r.T_coarse;
  j["T_fine"] = r.T_fine;
  j["epsilon"] = r.epsilon;
  j["solver_slack"] = r.solver_slack;
  j["c"] = r.hole_constants;
  j["alpha_G"] = r.alpha_G;
  j["alpha_G_tol"] = r.alpha_G_tol;
  j["alpha_S"] = r.alpha_S;
  j["alpha_S_tol"] = r.alpha_S_tol;
  j["alpha_S_tilde"] = r.alpha_S_tilde;
  j["alpha_S_tilde_tol"] = r.alpha_S_tilde_tol;
  j["beta"] = r.beta;
  j["beta_tol"] = r.beta_tol;
  j["S_minus_S_tilde"] = r.S_minus_S_tilde;
  j["V_at_S"] = r.V_at_S;
  j["u_star_at_S"] = r.u_star_at_S;
  j["thresholds"] = {{"s_G", r.thresholds.s_G},
                     {"s_S_tilde", r.thresholds.s_S_tilde},
                     {"t1_outer", r.thresholds.t1_outer},
                     {"t1_hole", r.thresholds.t1_hole}};
  const auto& d = r.truncation;
  Json trunc_json;
  trunc_json["computed"] = d.computed;
  trunc_json["exponents"] = {{"alpha", d.exponents.alpha}, {"beta", d.exponents.beta}, {"q", d.exponents.q}, {"r", d.exponents.r}};
  trunc_json["epsilon"] = d.epsilon;
  trunc_json["level"] = d.level;
  trunc_json["E"] = number_or_null(d.E);
  trunc_json["dirichlet_u"] = d.dirichlet_u;
  trunc_json["dirichlet_w"] = d.dirichlet_w;
  trunc_json["dirichlet_w_sharp"] = d.dirichlet_w_sharp;
  trunc_json["M"] = d.M;
  trunc_json["M_bound"] = d.M_bound;
  trunc_json["M_plateau"] = d.M_plateau;
  trunc_json["I_measure"] = d.I_measure;
  trunc_json["I_bound"] = d.I_bound;
  trunc_json["t_eps_beta"] = d.t_eps_beta;
  trunc_json["truncation_l1"] = d.truncation_l1;
  trunc_json["truncation_bound"] = d.truncation_bound;
  j["truncation"] = trunc_json;
  j["records"] = Json::array();
  for (auto& b : r.records) j["records"].push_back(to_json(b));
  j["hard_bounds_hold"] = r.hard_bounds_hold();
  return j;
}

inline Json to_json(const BetaTrend& t) {
  Json j;
  j["members"] = t.members;
  j["spearman"] = t.spearman;
  j["satisfied"] = t.satisfied;
  j["fitted"] = t.fitted;
  j["slope"] = t.slope ? Json(*t.slope) : Json(nullptr);
  j["slope_ci95"] = t.slope ? Json::array({*t.slope_lo, *t.slope_hi}) : Json(nullptr);
  return j;
}

// ---- CSV -------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\r\n";
}

/// Record names in report order (independent of any particular domain).
inline std::vector<std::string> bound_names() {
  DeficitReport dummy;
  dummy.G = 1.0;
  evaluate_bounds(dummy);
  std::vector<std::string> names;
  for (auto& r : dummy.records) names.push_back(r.name);
  return names;
}

inline std::vector<std::string> sweep_header() {
  std::vector<std::string> h{"index", "value", "T", "T_opt", "epsilon", "solver_slack", "alpha_G", "alpha_S", "beta",
                             "E_w", "M", "I_measure", "t_eps_beta"};
  for (auto& n : bound_names())
    for (const char* k : {"_lhs", "_rhs", "_slack"}) h.push_back(n + k);
  h.push_back("status");
  h.push_back("error");
  return h;
}

inline std::vector<std::string> sweep_row(int index, double value, const DeficitReport* r, const std::string& error) {
  std::vector<std::string> row{std::to_string(index), format_number(value)};
  const std::size_t bounds = bound_names().size();
  if (r) {
    const auto& d = r->truncation;
    for (double v : {r->T, r->T_opt, r->epsilon, r->solver_slack, r->alpha_G, r->alpha_S, r->beta, d.E, d.M,
                     d.I_measure, d.t_eps_beta})
      row.push_back(format_number(v));
    for (auto& b : r->records)
      for (double v : {b.lhs, b.rhs, b.slack}) row.push_back(format_number(v));
    row.push_back(r->hard_bounds_hold() ? "ok" : "violated");
  } else {
    row.insert(row.end(), 11 + 3 * bounds, "");
    row.push_back("failed");
  }
  row.push_back(error);
  return row;
}

// ---- SVG -------------------------------------------------------------------

class SvgCanvas {
 public:
  SvgCanvas(BoundingBox world, double width = 600, double height = 600, double margin = 40)
      : world_(world), width_(width), height_(height), margin_(margin) {
    if (world_.width() <= 0) world_.hi.x = world_.lo.x + 1;
    if (world_.height() <= 0) world_.hi.y = world_.lo.y + 1;
  }

  /// World → pixel, keeping the aspect ratio when `equal` is set.
  Point map(Point p, bool equal = true) const {
    double sx = (width_ - 2 * margin_) / world_.width(), sy = (height_ - 2 * margin_) / world_.height();
    if (equal) sx = sy = std::min(sx, sy);
    return {margin_ + (p.x - world_.lo.x) * sx, height_ - margin_ - (p.y - world_.lo.y) * sy};
  }

  void polyline(const std::vector<Point>& pts, const std::string& stroke, double w = 1.0, bool closed = false,
                bool equal = true) {
    if (pts.size() < 2) return;
    body_ << "<" << (closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"" << format_number(w) << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      Point q = map(pts[i], equal);
      body_ << (i ? " " : "") << format_number(round3(q.x)) << "," << format_number(round3(q.y));
    }
    body_ << "\"/>\n";
  }

  void segment(Point a, Point b, const std::string& stroke, double w = 1.0, bool equal = true) {
    Point p = map(a, equal), q = map(b, equal);
    body_ << "<line x1=\"" << format_number(round3(p.x)) << "\" y1=\"" << format_number(round3(p.y)) << "\" x2=\""
          << format_number(round3(q.x)) << "\" y2=\"" << format_number(round3(q.y)) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"" << format_number(w) << "\"/>\n";
  }

  void circle(Point c, double r, const std::string& fill, bool equal = true) {
    Point p = map(c, equal);
    body_ << "<circle cx=\"" << format_number(round3(p.x)) << "\" cy=\"" << format_number(round3(p.y)) << "\" r=\""
          << format_number(r) << "\" fill=\"" << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, const std::string& anchor = "start") {
    body_ << "<text x=\"" << format_number(x) << "\" y=\"" << format_number(y)
          << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"" << anchor << "\">" << escape(s)
          << "</text>\n";
  }

  double width() const { return width_; }
  double height() const { return height_; }
  double margin() const { return margin_; }

  std::string str() const {
    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width_) << "\" height=\""
      << format_number(height_) << "\" viewBox=\"0 0 " << format_number(width_) << " " << format_number(height_)
      << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
    return o.str();
  }

 private:
  static double round3(double v) { return std::round(v * 1000) / 1000; }
  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }

  BoundingBox world_;
  double width_, height_, margin_;
  std::ostringstream body_;
};

/// Domain outline plus `levels` iso-lines of the field.
inline std::string field_svg(const Domain& d, const ScalarField& f, int levels = 12) {
  SvgCanvas svg(d.outer().bbox());
  double top = f.max_value();
  for (int k = 1; k <= levels; ++k) {
    double t = top * k / (levels + 1);
    for (auto& tr : f.mesh->triangles) {
      std::vector<Point> cut;
      for (int i = 0; i < 3; ++i) {
        int a = tr[i], b = tr[(i + 1) % 3];
        double fa = f.values[a], fb = f.values[b];
        if ((fa < t && fb > t) || (fa > t && fb < t)) cut.push_back(detail::level_cut(f, a, b, t));
      }
      if (cut.size() == 2) svg.segment(cut[0], cut[1], "#3366cc", 0.8);
    }
  }
  auto ring = [](const Polygon& p) { return std::vector<Point>(p.vertices().begin(), p.vertices().end()); };
  svg.polyline(ring(d.outer()), "black", 1.5, true);
  for (auto& h : d.holes()) svg.polyline(ring(h), "black", 1.5, true);
  return svg.str();
}

/// log10 β against log10 ε for the members where both are positive.
inline std::string trend_svg(const std::vector<TrendPoint>& pts) {
  std::vector<Point> xy;
  for (auto& p : pts)
    if (p.epsilon > 0 && p.beta > 0) xy.push_back({std::log10(p.epsilon), std::log10(p.beta)});
  std::sort(xy.begin(), xy.end());
  BoundingBox box;
  for (auto& p : xy) box.add(p);
  if (box.empty()) box.add({0, 0});
  SvgCanvas svg(box, 600, 400, 50);
  const double m = svg.margin();
  svg.text(svg.width() / 2, svg.height() - 10, "log10 epsilon", "middle");
  svg.text(10, 20, "log10 beta");
  svg.polyline({{box.lo.x, box.lo.y}, {box.hi.x, box.lo.y}}, "black", 1, false, false);
  svg.polyline({{box.lo.x, box.lo.y}, {box.lo.x, box.hi.y}}, "black", 1, false, false);
  svg.text(m, svg.height() - m + 15, format_number(std::round(box.lo.x * 100) / 100), "middle");
  svg.text(svg.width() - m, svg.height() - m + 15, format_number(std::round(box.hi.x * 100) / 100), "middle");
  svg.polyline(xy, "#cc3333", 1.5, false, false);
  for (auto& p : xy) svg.circle(p, 3, "#cc3333", false);
  return svg.str();
}

}  // namespace torsionlab
