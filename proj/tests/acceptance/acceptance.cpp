// One line per acceptance criterion; exit status 1 if any fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "torsionlab/bounds.hpp"
#include "torsionlab/report.hpp"

using namespace torsionlab;

namespace {

int failures = 0;
auto started = std::chrono::steady_clock::now();

void report(int n, bool pass, const std::string& detail) {
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::printf("criterion %d: %s  %s [%.1fs]\n", n, pass ? "PASS" : "FAIL", detail.c_str(), secs);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

struct Member {
  std::string name;
  Domain domain;
  DeficitReport rep;
  bool concentric;
};

std::vector<Member>& family_set() {
  static std::vector<Member> set = [] {
    struct Spec {
      const char* name;
      FamilyKind kind;
      std::vector<double> p;
      bool concentric;
    };
    std::vector<Spec> specs{
        {"annulus", FamilyKind::offset_hole_annulus, {1, 0.5, 0}, true},
        {"offset 0.1", FamilyKind::offset_hole_annulus, {1, 0.5, 0.1}, false},
        {"offset 0.2", FamilyKind::offset_hole_annulus, {1, 0.5, 0.2}, false},
        {"offset 0.3", FamilyKind::offset_hole_annulus, {1, 0.5, 0.3}, false},
        {"thin annulus", FamilyKind::offset_hole_annulus, {1, 0.8, 0}, true},
        {"ellipse", FamilyKind::elliptic_outer, {1.2, 1 / 1.2, 0.5}, false},
        {"square", FamilyKind::square_with_square_hole, {2, 1, 0}, false},
        {"square offset", FamilyKind::square_with_square_hole, {2, 0.8, 0.3}, false},
        {"two holes", FamilyKind::multi_hole, {1, 0.25, -0.45, 0, 0.25, 0.45, 0}, false},
        {"three holes", FamilyKind::multi_hole, {1, 0.2, 0.45, 0, 0.2, -0.225, 0.39, 0.2, -0.225, -0.39}, false},
    };
    std::vector<Member> out;
    for (auto& s : specs) {
      auto d = domain_family(s.kind, std::span<const double>(s.p));
      out.push_back({s.name, d, deficit(d, 0.04), s.concentric});
    }
    return out;
  }();
  return set;
}

void criterion1() {
  auto d = validate_domain(Polygon::regular(256, 1.0), {});
  auto m0 = std::make_shared<const Mesh>(triangulate(d, 0.08));
  auto m1 = std::make_shared<const Mesh>(refine(*m0));
  auto m2 = std::make_shared<const Mesh>(refine(*m1));
  double T[3];
  int k = 0;
  for (auto& m : {m0, m1, m2}) T[k++] = solve_torsion(d, m).solution.T;
  const double exact = d.area() * d.area() / (8 * pi);
  double order = std::log2((T[0] - T[1]) / (T[1] - T[2]));
  double rel = std::abs(T[2] - exact) / exact;
  report(1, std::abs(order - 2) <= 0.3 && rel < 1e-2,
         fmt("disk: observed order %.3f, final relative error %.2e (T=%.6f, exact %.6f)", order, rel, T[2], exact));
}

void criterion2() {
  auto d = load_domain(std::string(TORSIONLAB_SAMPLES) + "/annulus.json");
  auto run = solve_torsion(d, 0.02);
  const double T_exact = 15 * pi / 128, c_exact = 3.0 / 16;
  double eT = std::abs(run.solution.T - T_exact) / T_exact;
  double ec = std::abs(run.solution.hole_constants.at(0) - c_exact) / c_exact;
  report(2, eT < 1e-2 && ec < 1e-2,
         fmt("annulus: T=%.6f (rel err %.2e), c1=%.6f (rel err %.2e)", run.solution.T, eT,
             run.solution.hole_constants[0], ec));
}

void criterion3() {
  auto& set = family_set();
  bool ok = set.size() >= 8;
  bool multi = false;
  double worst_conc = 0;
  for (auto& m : set) {
    multi = multi || m.rep.holes > 1;
    ok = ok && m.rep.T <= m.rep.T_opt + m.rep.solver_slack;
    if (m.concentric) {
      double ratio = std::abs(m.rep.epsilon) / m.rep.solver_slack;
      worst_conc = std::max(worst_conc, ratio);
      ok = ok && ratio <= 10;
    }
  }
  report(3, ok && multi,
         fmt("%g domains (multi-hole included: %g); T <= T(annulus) + slack on all; concentric |eps|/slack <= %.2f",
             double(set.size()), double(multi), worst_conc));
}

void criterion4() {
  // γ₂ from 181 n⁷ / (2 - 2^{(n-1)/n})^{3/2} in long double
  const long double n = 2;
  const long double g_ref = 181.0L * powl(n, 7) / powl(2.0L - powl(2.0L, (n - 1) / n), 1.5L);
  double g_rel = double(fabsl((long double)gamma_n(2) - g_ref) / g_ref);
  bool ok = g_rel <= 1e-10;
  int checked = 0;
  double min_margin = INFINITY;
  for (auto& m : family_set()) {
    auto* r = m.rep.find("two_asymmetries");
    if (m.rep.S > 0.75 * m.rep.G) continue;
    ++checked;
    ok = ok && r->applicable && r->satisfied;
    min_margin = std::min(min_margin, r->lhs + r->slack - r->rhs);
  }
  report(4, ok && checked > 0,
         fmt("gamma_2=%.10g (rel diff %.1e); %g members checked, min(eps + slack - rhs) = %.3e", double(g_ref), g_rel,
             double(checked), min_margin));
}

void criterion5() {
  bool ok = true;
  int checked = 0;
  double worst51 = -INFINITY, worst55 = -INFINITY;
  for (auto& m : family_set()) {
    if (m.rep.holes == 0) continue;
    ++checked;
    auto* a = m.rep.find("hole_pseudo_set");
    auto* b = m.rep.find("hole_asymmetry");
    ok = ok && a->satisfied && b->satisfied;
    worst51 = std::max(worst51, a->rhs / std::max(a->lhs + a->slack, 1e-300));
    worst55 = std::max(worst55, b->rhs / std::max(b->lhs + b->slack, 1e-300));
  }
  report(5, ok && checked > 0,
         fmt("%g multiply connected members; max rhs/(eps+slack): pseudo-set %.3e, hole asymmetry %.3e",
             double(checked), worst51, worst55));
}

void criterion6() {
  auto c3 = counterexample_profile(3, 10, 1, 2);
  auto c2 = counterexample_profile(2, 10, 1, 2);
  // closed form: (ω₃)^{-2/3}/6 · ((|B_r|+|S|)^{2/3} - |B_r|^{2/3} - |S|^{2/3}) with |S| = 1
  const double w3 = 4 * pi / 3, e = 2.0 / 3;
  const double closed = std::pow(w3, -e) / 6 * (std::pow(2.0, e) - 2.0);
  bool violated3 = false, holds2 = true;
  for (int i = 0; i <= 1000; ++i) {
    double s = 10.0 * i / 1000;
    violated3 = violated3 || c3.u(s) > c3.V(s) + 1e-12;
    holds2 = holds2 && c2.u(s) <= c2.V(s) + 1e-12;
  }
  bool ok = std::abs(c3.gap - closed) <= 1e-6 && std::abs(c3.gap - (-0.026463)) <= 1e-6 && c2.gap == 0.0 &&
            violated3 && holds2;
  report(6, ok,
         fmt("gap(n=3)=%.9f (closed form %.9f), gap(n=2)=%g; ", c3.gap, closed, c2.gap) +
             "u<=V violated for n=3: " + (violated3 ? "yes" : "no") + ", holds for n=2: " + (holds2 ? "yes" : "no"));
}

void criterion7() {
  double worst_lp = 0, worst_hl = -INFINITY, worst_ps = -INFINITY, worst_D = 0;
  bool nested = true;
  int fields = 0;
  for (auto [kind, p] : std::vector<std::pair<FamilyKind, std::vector<double>>>{
           {FamilyKind::offset_hole_annulus, {1, 0.5, 0}},
           {FamilyKind::offset_hole_annulus, {1, 0.5, 0.3}},
           {FamilyKind::square_with_square_hole, {2, 1, 0}},
           {FamilyKind::multi_hole, {1, 0.25, -0.45, 0, 0.25, 0.45, 0}}}) {
    auto d = domain_family(kind, std::span<const double>(p));
    auto run = solve_torsion(d, 0.04);
    for (const ScalarField& f : {extended_field(run.solution, run.mesh, d), omega_field(run.solution, run.mesh)}) {
      ++fields;
      Rearrangement R(f);
      for (int k : {1, 2}) {
        double a = lp_norm_pow(f, k), b = R.integral_pow(k);
        worst_lp = std::max(worst_lp, std::abs(a - b) / a);
      }
      // radial weight centred off the domain centre
      std::vector<double> g;
      for (auto x : f.mesh->nodes) g.push_back(std::exp(-dot(x - Point{0.3, -0.2}, x - Point{0.3, -0.2})));
      ScalarField gf = make_field(f.mesh, g, f.covers_holes);
      auto hl = hardy_littlewood_check(f, gf);
      worst_hl = std::max(worst_hl, (hl.lhs - hl.rhs) / hl.rhs);
      auto ps = polya_szego_check(f, R);
      worst_ps = std::max(worst_ps, (ps.dirichlet_sharp - ps.dirichlet) / ps.dirichlet);
      PseudoSet prev;
      for (double frac : {0.05, 0.15, 0.3, 0.5, 0.8}) {
        auto D = pseudo_set(f, R, frac * R.mu(0.0));
        worst_D = std::max(worst_D, std::abs(D.measure - frac * R.mu(0.0)));
        for (auto& ring : prev.pieces.pieces) {
          Point c{};
          for (auto q : ring) c = c + (1.0 / ring.size()) * q;
          nested = nested && D.region.contains(c);
        }
        prev = D;
      }
    }
  }
  bool ok = worst_lp <= 1e-8 && worst_hl <= 5e-3 && worst_ps <= 5e-3 && worst_D <= 1e-10 && nested;
  report(7, ok,
         fmt("%g fields: max |Lp - Lp*|/Lp %.1e, max HL excess %.1e, max PS excess %.1e, ", double(fields), worst_lp,
             worst_hl, worst_ps) +
             fmt("max |D(s)| error %.1e, nested: ", worst_D) + (nested ? "yes" : "no"));
}

// |[0,1]² ∩ B(c, r)| by adaptive quadrature of the chord length.
double square_overlap(Point c, double r) {
  auto chord = [&](double x) {
    double dx = x - c.x;
    if (std::abs(dx) >= r) return 0.0;
    double hh = std::sqrt(r * r - dx * dx);
    return std::max(0.0, std::min(1.0, c.y + hh) - std::max(0.0, c.y - hh));
  };
  double lo = std::max(0.0, c.x - r), hi = std::min(1.0, c.x + r);
  if (!(hi > lo)) return 0.0;
  // split where the chord starts or stops being clipped by y = 0 or y = 1
  std::vector<double> cuts{lo, hi};
  for (double gap : {c.y, 1 - c.y})
    if (gap < r)
      for (double sgn : {-1.0, 1.0}) {
        double x = c.x + sgn * std::sqrt(r * r - gap * gap);
        if (x > lo && x < hi) cuts.push_back(x);
      }
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(chord, cuts[i], cuts[i + 1], 15, 1e-13);
  return total;
}

void criterion8() {
  const double g2 = gamma_n(2);
  bool ok = true;
  double worst = INFINITY;
  auto check = [&](const Region& r) {
    auto q = quant_isoperimetric_slack(r);
    // polygonization slack: the certified tolerance of α propagated to the rhs
    double slack = 2 * std::sqrt(pi * r.area()) * (std::pow(q.alpha + q.alpha_tolerance, 2) - q.alpha * q.alpha) / g2;
    worst = std::min(worst, (q.perimeter - q.rhs + slack) / q.perimeter);
    ok = ok && q.perimeter >= q.rhs - slack;
  };
  check(Region::from_polygon(Polygon::regular(256, 1.0)));
  check(Region::from_polygon(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})));
  check(Region::from_polygon(Polygon({{0, 0}, {4, 0}, {4, 0.25}, {0, 0.25}})));
  std::mt19937 rng(20240607);
  std::uniform_real_distribution<double> radius(0.4, 1.0), jitter(-0.3, 0.3);
  for (int i = 0; i < 20; ++i) {
    int k = 5 + int(rng() % 20);
    std::vector<Point> v;
    for (int j = 0; j < k; ++j) {
      double t = 2 * pi * (j + 0.5 + jitter(rng)) / k;
      double rr = radius(rng);
      v.push_back({rr * std::cos(t), rr * std::sin(t)});
    }
    check(Region::from_polygon(Polygon(v)));
  }
  // dense grid over centres with the quadrature overlap
  const double rho = 1 / std::sqrt(pi);
  double best = 0;
  Point best_c{};
  for (int i = 0; i <= 80; ++i)
    for (int j = 0; j <= 80; ++j) {
      Point c{0.3 + 0.4 * i / 80, 0.3 + 0.4 * j / 80};
      double o = square_overlap(c, rho);
      if (o > best) best = o, best_c = c;
    }
  const double alpha_oracle = 2 * (1 - best);
  const double alpha = fraenkel_asymmetry(Region::from_polygon(Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}))).value;
  bool alpha_ok = std::abs(alpha - alpha_oracle) <= 1e-3 && dist(best_c, {0.5, 0.5}) < 1e-9;
  report(8, ok && alpha_ok,
         fmt("23 regions, min relative (P - rhs + slack)/P = %.3e; alpha(square)=%.6f vs grid oracle %.6f "
             "(listed value 0.18425 differs from the oracle by %.4f)",
             worst, alpha, alpha_oracle, std::abs(0.18425 - alpha_oracle)));
}

void criterion9() {
  std::vector<double> offsets{0.3, 0.2, 0.1, 0.05, 0.0};
  std::vector<TrendPoint> pts;
  std::vector<double> eps, E, I, beta;
  bool sign_ok = true;
  std::string trunc_ps;
  for (double dd : offsets) {
    auto rep = deficit(domain_family(FamilyKind::offset_hole_annulus, {1, 0.5, dd}), 0.04);
    pts.push_back({dd, rep.epsilon, rep.beta});
    eps.push_back(rep.epsilon);
    E.push_back(rep.truncation.E);
    I.push_back(rep.truncation.I_measure);
    beta.push_back(rep.beta);
    sign_ok = sign_ok && rep.find("polya_szego_sign")->satisfied;
    trunc_ps += fmt(" %.2e<=%.2e", rep.truncation.ps_trunc_lhs, rep.truncation.ps_trunc_rhs);
  }
  auto trend = beta_trend(pts);
  // each quantity must reach its smallest value at d = 0 and decrease along the family
  auto decreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] + 1e-12) return false;
    return true;
  };
  bool to_zero = decreasing(eps) && decreasing(E) && decreasing(I) && decreasing(beta) && eps.back() < 1e-4 &&
                 E.back() < 5e-3 && beta.back() < 1e-2;
  report(9, trend.satisfied && to_zero && sign_ok,
         fmt("spearman(eps, beta)=%.3f; eps %.2e -> %.2e, E(w) %.2e -> ", trend.spearman, eps.front(), eps.back(),
             E.front()) +
             fmt("%.2e, |I| %.2e -> %.2e, beta %.3f -> ", E.back(), I.front(), I.back(), beta.front()) +
             fmt("%.2e; PS sign ok: ", beta.back()) + (sign_ok ? "yes" : "no") + "; truncation PS (lhs<=rhs):" + trunc_ps);
}

void criterion10() {
  namespace fs = std::filesystem;
  fs::path work = fs::current_path() / "acceptance_determinism";
  fs::remove_all(work);
  std::string domain = std::string(TORSIONLAB_SAMPLES) + "/offset_annulus.json";
  int rc = 0;
  for (const char* run : {"a", "b"}) {
    std::string cmd = std::string("\"") + TORSIONLAB_CLI + "\" verify --domain \"" + domain + "\" --out \"" +
                      (work / run).string() + "\" > /dev/null";
    rc |= std::system(cmd.c_str());
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::string a = slurp(work / "a" / "report.json"), b = slurp(work / "b" / "report.json");
  report(10, rc == 0 && !a.empty() && a == b,
         fmt("two verify runs: exit %g, %g bytes, identical: ", double(rc), double(a.size())) + (a == b ? "yes" : "no"));
}

}  // namespace

int main() {
  void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                          criterion6, criterion7, criterion8, criterion9, criterion10};
  for (int i = 0; i < 10; ++i) {
    started = std::chrono::steady_clock::now();
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(i + 1, false, std::string("threw: ") + e.what());
    }
  }
  return failures == 0 ? 0 : 1;
}
