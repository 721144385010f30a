#pragma once

// Deficit ε = T(Ω°) - T(Ω) and the explicit lower bounds it must dominate.
// Everything here is planar: the constants are the n = 2 ones.
//
// Normalisation: -Δu = 1, so the symmetrised profile is V(s) = (|G| - max(s, |S|))/(4π),
// |∇Ṽ|(x) = |x|/2 and μ_Ṽ' = -4π off the plateau.

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/field.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/mesh.hpp"
#include "torsionlab/radial.hpp"
#include "torsionlab/rearrange.hpp"
#include "torsionlab/torsion.hpp"

namespace torsionlab {

/// Constant of the quantitative isoperimetric inequality.
inline double gamma_n(int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension must be at least 2");
  double nn = n;
  return 181.0 * std::pow(nn, 7) / std::pow(2.0 - std::pow(2.0, (nn - 1) / nn), 1.5);
}

struct IsoperimetricSlack {
  double perimeter = 0.0;
  double rhs = 0.0;  // 2√π |Ω|^{1/2} (1 + α²/γ₂)
  double alpha = 0.0;
  double alpha_tolerance = 0.0;
};

inline IsoperimetricSlack quant_isoperimetric_slack(const Region& r, const AsymmetryOptions& opt = {}) {
  if (!(r.area() > 0)) throw Error(ErrorCode::invalid_argument, "region has no area");
  auto a = fraenkel_asymmetry(r, opt);
  IsoperimetricSlack out;
  out.perimeter = r.perimeter();
  out.alpha = a.value;
  out.alpha_tolerance = a.certified_tolerance;
  out.rhs = 2.0 * std::sqrt(pi * r.area()) * (1.0 + a.value * a.value / gamma_n(2));
  return out;
}

/// Free exponents of the almost-radiality argument.
struct TruncationExponents {
  double alpha = 1.0 / 8;
  double beta = 1.0 / 16;
  double q = 1.0 / 4;
  double r = 1.0 / 8;

  void validate() const {
    if (!(alpha > 0 && alpha < 0.5)) throw Error(ErrorCode::invalid_argument, "need 0 < alpha < 1/2");
    if (!(beta > 0 && beta < alpha)) throw Error(ErrorCode::invalid_argument, "need 0 < beta < alpha");
    if (!(q > 0 && q < 0.5 - alpha)) throw Error(ErrorCode::invalid_argument, "need 0 < q < 1/2 - alpha");
    if (!(r > 0 && r < 0.5 - alpha)) throw Error(ErrorCode::invalid_argument, "need 0 < r < 1/2 - alpha");
  }
};

struct Thresholds {
  double s_G = 0.0;
  double s_S_tilde = 0.0;
  double t1_outer = 0.0;
  double t1_hole = 0.0;
};

struct BoundRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool satisfied = true;
  bool hard = true;        // a violation is a pipeline defect
  bool applicable = true;  // hypotheses hold
};

/// Computable quantities of the almost-radiality argument, evaluated after
/// rescaling to |G| = 1 (u scales as length², T and ε as length⁴).
struct TruncationDiagnostics {
  bool computed = false;
  TruncationExponents exponents;
  double epsilon = 0.0;  // normalised deficit
  double level = 0.0;    // ũ*(|S|)
  double dirichlet_u = 0.0;
  double dirichlet_w = 0.0;
  double dirichlet_w_sharp = 0.0;
  double E = 0.0;
  double top_measure = 0.0;       // |{w >= ũ*(|S|)}|
  double truncation_l1 = 0.0;     // ‖ũ - w‖₁
  double truncation_bound = 0.0;  // |S| (Ṽ(|S|) - ũ*(|S|))
  double M = 0.0;                 // M_{w♯}(ε^r)
  double M_bound = 0.0;
  double M_plateau = 0.0;  // M_{w♯}(0)
  double I_measure = 0.0;
  double I_bound = 0.0;
  double t_eps_beta = 0.0;
  double ps_trunc_lhs = 0.0;
  double ps_trunc_rhs = 0.0;
};

struct DeficitOptions {
  double cg_tol = 1e-10;
  AsymmetryOptions asymmetry{};
  MeshOptions mesh{};
  TruncationExponents exponents{};
  bool truncation = true;
  int level_grid = 2000;  // samples for the I-set
};

struct DeficitReport {
  int holes = 0;
  double G = 0.0;
  double S = 0.0;
  double h = 0.0;
  double T_opt = 0.0;
  double T_coarse = 0.0;
  double T_fine = 0.0;
  double T = 0.0;  // Richardson extrapolation
  double epsilon = 0.0;
  double solver_slack = 0.0;
  std::vector<double> hole_constants;
  double alpha_G = 0.0, alpha_G_tol = 0.0;
  double alpha_S = 0.0, alpha_S_tol = 0.0;
  double alpha_S_tilde = 0.0, alpha_S_tilde_tol = 0.0;
  double beta = 0.0, beta_tol = 0.0;
  double S_minus_S_tilde = 0.0;
  double V_at_S = 0.0;       // Ṽ(|S|)
  double u_star_at_S = 0.0;  // ũ*(|S|)
  Thresholds thresholds;
  std::vector<BoundRecord> records;
  TruncationDiagnostics truncation;

  bool hard_bounds_hold() const {
    return std::all_of(records.begin(), records.end(), [](const BoundRecord& r) { return !r.hard || r.satisfied; });
  }
  const BoundRecord* find(const std::string& name) const {
    for (auto& r : records)
      if (r.name == name) return &r;
    return nullptr;
  }
};

namespace detail {

// sup{t >= 0 : μ(t) >= m}, 0 if empty.
inline double level_sup_at_least(const Rearrangement& R, double m) {
  if (R.mu(0.0) < m) return 0.0;
  double lo = 0.0, hi = std::max(R.max(), 0.0);
  if (R.mu(hi) >= m) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1e-300, R.max()); ++it) {
    double mid = 0.5 * (lo + hi);
    (R.mu(mid) >= m ? lo : hi) = mid;
  }
  return lo;
}

// inf{τ in [0, cap] : μ(τ) <= m}.
inline double level_inf_at_most(const Rearrangement& R, double m, double cap) {
  if (R.mu(0.0) <= m) return 0.0;
  double lo = 0.0, hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1e-300, cap); ++it) {
    double mid = 0.5 * (lo + hi);
    (R.mu(mid) <= m ? hi : lo) = mid;
  }
  return hi;
}

// sup{t > 0 : μ(t) > m}.
inline double level_sup_above(const Rearrangement& R, double m) {
  if (R.mu(0.0) <= m) return 0.0;
  double lo = 0.0, hi = std::max(R.max(), 0.0);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1e-300, R.max()); ++it) {
    double mid = 0.5 * (lo + hi);
    (R.mu(mid) > m ? lo : hi) = mid;
  }
  return lo;
}

inline ScalarField scaled_field(const ScalarField& f, double lambda) {
  auto m = std::make_shared<Mesh>(*f.mesh);
  for (auto& p : m->nodes) p = lambda * p;
  m->h *= lambda;
  ScalarField g = make_field(m, f.values, f.covers_holes);
  for (auto& v : g.values) v *= lambda * lambda;
  for (auto p : f.plateaus) {
    p.value *= lambda * lambda;
    p.measure *= lambda * lambda;
    g.plateaus.push_back(p);
  }
  return g;
}

inline double positive_pow(double x, double e) { return x > 0 ? std::pow(x, e) : 0.0; }

// rhs(α + tol) - rhs(α) for rhs = k α^p.
inline double alpha_sensitivity(double k, double a, double tol, int p) {
  return k * (std::pow(std::min(a + tol, 2.0), p) - std::pow(a, p));
}

}  // namespace detail

/// Thresholds s_G, s_S̃ and the auxiliary t₁ levels for the extended field.
inline Thresholds thresholds(const Rearrangement& R, double G, double S, double alpha_G, double alpha_S_tilde) {
  Thresholds th;
  th.s_G = detail::level_sup_at_least(R, G * (1.0 - alpha_G / 4));
  if (S > 0) th.s_S_tilde = detail::level_inf_at_most(R, S * (1.0 + alpha_S_tilde / 4), R(S));
  th.t1_outer = G * alpha_G / (64 * pi);
  th.t1_hole = S * alpha_S_tilde / (32 * pi);
  return th;
}

/// w = min{ũ, ũ*(|S|)}, exact on a mesh split along the cut level.
inline ScalarField truncation_w(const ScalarField& u_ext, const Rearrangement& R, double S) {
  return truncate(u_ext, R(S));
}

inline ScalarField truncation_w(const ScalarField& u_ext, double S) {
  return truncation_w(u_ext, Rearrangement(u_ext), S);
}

// ---- bound records --------------------------------------------------------

inline BoundRecord polya_weinstein_record(const DeficitReport& rep) {
  BoundRecord b{"polya_weinstein", rep.epsilon, 0.0, rep.solver_slack};
  b.satisfied = b.lhs + b.slack >= b.rhs;
  return b;
}

inline BoundRecord bound_two_asymmetries(const DeficitReport& rep) {
  const double k = 1.0 / (9 * 512 * pi * gamma_n(2));
  BoundRecord b{"two_asymmetries", rep.epsilon};
  b.rhs = k * (rep.G * rep.G * std::pow(rep.alpha_G, 3) + rep.S * rep.S * std::pow(rep.alpha_S, 3));
  b.slack = rep.solver_slack + detail::alpha_sensitivity(k * rep.G * rep.G, rep.alpha_G, rep.alpha_G_tol, 3) +
            detail::alpha_sensitivity(k * rep.S * rep.S, rep.alpha_S, rep.alpha_S_tol, 3);
  b.applicable = rep.S <= 0.75 * rep.G;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

inline BoundRecord bound_outer(const DeficitReport& rep) {
  const double k = rep.G * rep.G / (512 * pi * gamma_n(2));
  BoundRecord b{"outer_asymmetry", rep.epsilon, k * std::pow(rep.alpha_G, 3)};
  b.slack = rep.solver_slack + detail::alpha_sensitivity(k, rep.alpha_G, rep.alpha_G_tol, 3);
  b.applicable = rep.S <= 0.75 * rep.G;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

inline BoundRecord bound_outer_threshold(const DeficitReport& rep) {
  const double k = rep.thresholds.s_G * rep.G / (8 * gamma_n(2));
  BoundRecord b{"outer_threshold", rep.epsilon, k * rep.alpha_G * rep.alpha_G};
  b.slack = rep.solver_slack + detail::alpha_sensitivity(k, rep.alpha_G, rep.alpha_G_tol, 2);
  b.satisfied = b.lhs + b.slack >= b.rhs;
  return b;
}

inline BoundRecord bound_hole_pseudo(const DeficitReport& rep) {
  BoundRecord b{"hole_pseudo_set", rep.epsilon, rep.S * rep.S_minus_S_tilde / (4 * pi), rep.solver_slack};
  b.applicable = rep.holes > 0;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

inline std::vector<BoundRecord> bound_hole_asym(const DeficitReport& rep) {
  const double g = gamma_n(2);
  const double k52 = rep.S * rep.S / (9 * 16 * pi * g);
  const double k55 = rep.S * rep.S / (9 * 512 * pi * g);
  BoundRecord a{"pseudo_set_asymmetry", rep.epsilon, k52 * std::pow(rep.alpha_S_tilde, 3)};
  a.slack = rep.solver_slack + detail::alpha_sensitivity(k52, rep.alpha_S_tilde, rep.alpha_S_tilde_tol, 3);
  BoundRecord b{"hole_asymmetry", rep.epsilon, k55 * std::pow(rep.alpha_S, 3)};
  b.slack = rep.solver_slack + detail::alpha_sensitivity(k55, rep.alpha_S, rep.alpha_S_tol, 3);
  for (auto* r : {&a, &b}) {
    r->applicable = rep.holes > 0;
    r->satisfied = !r->applicable || r->lhs + r->slack >= r->rhs;
  }
  return {a, b};
}

inline BoundRecord bound_hole_threshold(const DeficitReport& rep) {
  const double k = std::max(0.0, rep.u_star_at_S - rep.thresholds.s_S_tilde) * 2 * rep.S / (9 * gamma_n(2));
  BoundRecord b{"hole_threshold", rep.epsilon, k * rep.alpha_S_tilde * rep.alpha_S_tilde};
  b.slack = rep.solver_slack + detail::alpha_sensitivity(k, rep.alpha_S_tilde, rep.alpha_S_tilde_tol, 2);
  b.applicable = rep.holes > 0;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

inline BoundRecord envelope_bound_check(const DeficitReport& rep) {
  double gap = std::max(0.0, rep.V_at_S - rep.u_star_at_S);
  BoundRecord b{"envelope", rep.epsilon, 2 * pi * gap * gap, rep.solver_slack};
  b.applicable = rep.holes > 0;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

/// Reported only: the constant assumes a different normalisation of T(Ω°).
inline BoundRecord truncation_ps_check(const DeficitReport& rep) {
  BoundRecord b{"truncation_polya_szego", rep.truncation.ps_trunc_lhs, rep.truncation.ps_trunc_rhs};
  b.hard = false;
  b.applicable = rep.truncation.computed;
  b.satisfied = !b.applicable || b.lhs <= b.rhs;
  return b;
}

/// Sign of ∫|∇w|² - ∫|∇w♯|², within 5e-3 relative discretisation slack.
inline BoundRecord polya_szego_sign(const DeficitReport& rep) {
  BoundRecord b{"polya_szego_sign", rep.truncation.ps_trunc_lhs, 0.0, 5e-3 * rep.truncation.dirichlet_w};
  b.applicable = rep.truncation.computed;
  b.satisfied = !b.applicable || b.lhs + b.slack >= b.rhs;
  return b;
}

/// ‖ũ - w‖₁ <= |S|(Ṽ(|S|) - ũ*(|S|)) and |{w >= ũ*(|S|)}| >= |S| (both
/// normalised to |G| = 1).
inline std::vector<BoundRecord> truncation_records(const DeficitReport& rep) {
  const auto& d = rep.truncation;
  const double tol = 1e-9;
  BoundRecord a{"truncation_support", d.top_measure, rep.S / rep.G, tol};
  BoundRecord b{"truncation_amplitude", d.truncation_bound, d.truncation_l1, tol + rep.solver_slack / (rep.G * rep.G)};
  BoundRecord c{"truncation_energy", d.dirichlet_u, d.dirichlet_w, tol * std::max(1.0, d.dirichlet_u)};
  for (auto* r : {&a, &b, &c}) {
    r->applicable = d.computed;
    r->satisfied = !r->applicable || r->lhs + r->slack >= r->rhs;
  }
  return {a, b, c};
}

/// Rebuild every record from the measured quantities (idempotent).
inline void evaluate_bounds(DeficitReport& rep) {
  rep.epsilon = rep.T_opt - rep.T;
  rep.records.clear();
  rep.records.push_back(polya_weinstein_record(rep));
  rep.records.push_back(bound_two_asymmetries(rep));
  rep.records.push_back(bound_outer_threshold(rep));
  rep.records.push_back(bound_outer(rep));
  rep.records.push_back(bound_hole_pseudo(rep));
  for (auto& r : bound_hole_asym(rep)) rep.records.push_back(r);
  rep.records.push_back(bound_hole_threshold(rep));
  rep.records.push_back(envelope_bound_check(rep));
  for (auto& r : truncation_records(rep)) rep.records.push_back(r);
  rep.records.push_back(polya_szego_sign(rep));
  rep.records.push_back(truncation_ps_check(rep));
}

/// E, M, |I| and t_{ε,β} for the truncation w on the domain rescaled to
/// |G| = 1. `eps` is the deficit of the rescaled domain.
inline TruncationDiagnostics ps_deficit_diag(const ScalarField& u_ext, double G, double S, double eps,
                                           const TruncationExponents& ex = {}, int level_grid = 2000) {
  ex.validate();
  TruncationDiagnostics d;
  d.computed = true;
  d.exponents = ex;
  d.epsilon = eps;
  const double lambda = 1.0 / std::sqrt(G);
  ScalarField u = detail::scaled_field(u_ext, lambda);
  const double s = S / G;
  Rearrangement Ru(u);
  d.level = Ru(s);
  ScalarField w = truncate(u, d.level);
  Rearrangement Rw(w);

  d.dirichlet_u = dirichlet_energy(u);
  auto ps = polya_szego_check(w, Rw);
  d.dirichlet_w = ps.dirichlet;
  d.dirichlet_w_sharp = ps.dirichlet_sharp;
  d.E = ps.E;
  d.ps_trunc_lhs = ps.dirichlet - ps.dirichlet_sharp;
  const double ep = std::max(eps, 0.0);
  d.ps_trunc_rhs = 6.0 / std::sqrt(2 * pi) * std::sqrt(ep);

  d.top_measure = Rw.mu_left(d.level);
  d.truncation_l1 = lp_norm_pow(u, 1) - lp_norm_pow(w, 1);
  const double V_at_S = (1.0 - s) / (4 * pi);
  d.truncation_bound = s * std::max(0.0, V_at_S - d.level);

  const double support = Rw.mu(0.0);
  const double delta = detail::positive_pow(ep, ex.r);
  if (support > 0) {
    d.M = Rw.sharp_gradient_measure(delta) / support;
    d.M_plateau = Rw.sharp_gradient_measure(0.0) / support;
  }
  const double K = 4 * pi;  // |{|∇Ṽ| <= δ}| <= 4πδ² with |∇Ṽ| = |x|/2
  d.M_bound = pi * std::pow(delta + detail::positive_pow(ep, ex.alpha - ex.beta) / (2 * std::sqrt(pi)), 2) +
              K * detail::positive_pow(ep, 2 * ex.q) + 2 * std::sqrt(pi) * detail::positive_pow(ep, 0.5 - ex.alpha - ex.q) +
              detail::positive_pow(ep, 2 * ex.beta);

  // I = {t in [0, ũ*(|S|)] : flux of Ṽ - flux of w♯ > ε^α}; in the plane
  // ∫_{u♯=t}|∇u♯| = 4πμ(t)/(-μ'(t)) and for Ṽ it is μ_Ṽ(t) = 1 - 4πt.
  const double thr = detail::positive_pow(ep, ex.alpha);
  int count = 0;
  for (int i = 0; i < level_grid; ++i) {
    double t = d.level * (i + 0.5) / level_grid;
    double slope = Rw.mu_slope(t);
    double flux_w = slope > 0 ? 4 * pi * Rw.mu(t) / slope : 0.0;
    double flux_V = std::max(0.0, 1.0 - 4 * pi * t);
    if (flux_V - flux_w > thr) ++count;
  }
  d.I_measure = d.level * count / level_grid;
  d.I_bound = 6.0 / std::sqrt(2 * pi) * detail::positive_pow(ep, 0.5 - ex.alpha);
  d.t_eps_beta = detail::level_sup_above(Rw, detail::positive_pow(ep, 2 * ex.beta));
  return d;
}

/// Full pipeline: FEM at h and h/2 (red refinement), Richardson T, the
/// exact annulus value, asymmetries, thresholds, diagnostics and records.
inline DeficitReport deficit(const Domain& d, double h, const DeficitOptions& opt = {}) {
  DeficitReport rep;
  rep.holes = int(d.hole_count());
  rep.G = d.outer_area();
  rep.S = d.holes_area();
  rep.h = h;
  rep.T_opt = annulus_torsion_exact(rep.G, rep.S, 2);

  auto coarse = std::make_shared<const Mesh>(triangulate(d, h, opt.mesh));
  auto fine = std::make_shared<const Mesh>(refine(*coarse));
  auto run_c = solve_torsion(d, coarse, opt.cg_tol);
  auto run_f = solve_torsion(d, fine, opt.cg_tol);
  rep.T_coarse = run_c.solution.T;
  rep.T_fine = run_f.solution.T;
  rep.T = (4 * rep.T_fine - rep.T_coarse) / 3;
  // c₁h² with c₁ fitted from the two levels, plus the algebraic residual
  rep.solver_slack = std::abs(rep.T_fine - rep.T_coarse) / 3 + 10 * opt.cg_tol * std::abs(rep.T_fine);
  rep.hole_constants = run_f.solution.hole_constants;

  auto aG = fraenkel_asymmetry(d.outer_region(), opt.asymmetry);
  rep.alpha_G = aG.value;
  rep.alpha_G_tol = aG.certified_tolerance;
  if (rep.holes > 0) {
    auto aS = fraenkel_asymmetry(d.holes_region(), opt.asymmetry);
    rep.alpha_S = aS.value;
    rep.alpha_S_tol = aS.certified_tolerance;
  }
  auto b = annular_asymmetry(d, opt.asymmetry);
  rep.beta = b.value;
  rep.beta_tol = b.certified_tolerance;

  ScalarField u = extended_field(run_f.solution, fine, d);
  Rearrangement R(u);
  rep.V_at_S = (rep.G - rep.S) / (4 * pi);
  rep.u_star_at_S = R(rep.S);
  if (rep.holes > 0) {
    auto D = pseudo_set(u, R, rep.S);
    rep.S_minus_S_tilde = std::max(0.0, rep.S - D.hole_measure);
    auto aT = fraenkel_asymmetry(D.region, opt.asymmetry);
    rep.alpha_S_tilde = aT.value;
    rep.alpha_S_tilde_tol = aT.certified_tolerance;
  }
  rep.thresholds = thresholds(R, rep.G, rep.S, rep.alpha_G, rep.alpha_S_tilde);

  if (opt.truncation) {
    const double eps1 = (rep.T_opt - rep.T) / (rep.G * rep.G);
    rep.truncation = ps_deficit_diag(u, rep.G, rep.S, eps1, opt.exponents, opt.level_grid);
  }
  evaluate_bounds(rep);
  return rep;
}

// ---- family trend ---------------------------------------------------------

struct TrendPoint {
  double parameter = 0.0;
  double epsilon = 0.0;
  double beta = 0.0;
};

struct BetaTrend {
  std::size_t members = 0;
  double spearman = 0.0;
  bool satisfied = false;  // spearman > 0.9
  std::size_t fitted = 0;  // members with ε > 0 and β > 0
  std::optional<double> slope, slope_lo, slope_hi;  // log β = a + slope log ε, 95% CI
};

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) rank[idx[k]] = 0.5 * double(i + j) + 1;
    i = j + 1;
  }
  return rank;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace detail

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return detail::pearson(detail::average_ranks(x), detail::average_ranks(y));
}

/// β must follow ε down along the family; the log–log slope is data only.
inline BetaTrend beta_trend(const std::vector<TrendPoint>& pts) {
  std::vector<double> eps, beta;
  for (auto& p : pts) {
    eps.push_back(p.epsilon);
    beta.push_back(p.beta);
  }
  std::vector<double> distinct = eps;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (pts.size() < 3 || distinct.size() < 3)
    throw Error(ErrorCode::insufficient_family, "need at least 3 members with distinct deficits");
  BetaTrend out;
  out.members = pts.size();
  out.spearman = spearman(eps, beta);
  out.satisfied = out.spearman > 0.9;

  std::vector<double> lx, ly;
  for (auto& p : pts)
    if (p.epsilon > 0 && p.beta > 0) {
      lx.push_back(std::log(p.epsilon));
      ly.push_back(std::log(p.beta));
    }
  out.fitted = lx.size();
  if (lx.size() >= 3) {
    const double n = double(lx.size());
    double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n, my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx > 0) {
      double slope = sxy / sxx, icpt = my - slope * mx, sse = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) sse += std::pow(ly[i] - icpt - slope * lx[i], 2);
      double se = std::sqrt(sse / (n - 2) / sxx);
      double tq = boost::math::quantile(boost::math::students_t(n - 2), 0.975);
      out.slope = slope;
      out.slope_lo = slope - tq * se;
      out.slope_hi = slope + tq * se;
    }
  }
  return out;
}

}  // namespace torsionlab
