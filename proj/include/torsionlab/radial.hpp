#pragma once

// Radial objects in any dimension n >= 2, all written in the measure
// variable s = ω_n |x|^n: the symmetrised torsion function V on the annulus
// with the same |G| and |S|, its torsional rigidity, the weight ζ⁻¹ built
// from the hole levels, the pointwise bound w, and the n >= 3 example where
// the pointwise comparison fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/profile.hpp"

namespace torsionlab {

/// Volume of the unit ball in R^n.
inline double omega_n(int n) { return std::pow(pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

inline double measure_of_radius(int n, double r) { return omega_n(n) * std::pow(r, n); }
inline double radius_of_measure(int n, double s) { return std::pow(s / omega_n(n), 1.0 / n); }

/// Positive nonincreasing function on [0, x.back()], linear between samples.
struct TabulatedWeight {
  std::vector<double> x;
  std::vector<double> y;

  void validate(double needed_extent) const {
    if (x.size() < 2 || x.size() != y.size())
      throw Error(ErrorCode::invalid_argument, "weight table needs at least two (x, value) samples");
    if (x.front() != 0.0) throw Error(ErrorCode::invalid_argument, "weight table must start at 0");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(y[i] > 0)) throw Error(ErrorCode::invalid_argument, "weight must be positive");
      if (i > 0 && !(x[i] > x[i - 1])) throw Error(ErrorCode::invalid_argument, "weight abscissae must increase");
      if (i > 0 && y[i] > y[i - 1]) throw Error(ErrorCode::invalid_argument, "weight must be nonincreasing");
    }
    if (x.back() < needed_extent * (1 - 1e-12))
      throw Error(ErrorCode::invalid_argument, "weight table does not cover [0, |G| - |S|]");
  }

  double operator()(double r) const {
    if (r <= x.front()) return y.front();
    if (r >= x.back()) return y.back();
    std::size_t j = std::size_t(std::upper_bound(x.begin(), x.end(), r) - x.begin());
    double w = (r - x[j - 1]) / (x[j] - x[j - 1]);
    return y[j - 1] + w * (y[j] - y[j - 1]);
  }
};

/// A hole level as seen from the measure variable: μ(c_h) is the measure of
/// {u > c_h} inside Ω, `measure` is |Ω_h|.
struct HoleBreakpoint {
  double mu_level = 0.0;
  double measure = 0.0;
};

struct RadialSpec {
  int n = 2;
  double G = 0.0;
  double S = 0.0;
  std::vector<TabulatedWeight> nu;     // empty: ν* ≡ 1, else exactly one table
  std::vector<HoleBreakpoint> holes;   // ordered so that μ(c_m) <= ... <= μ(c_1)

  bool unit_weight() const { return nu.empty(); }
  double nu_inverse(double r) const { return unit_weight() ? 1.0 : 1.0 / nu.front()(r); }

  void validate() const {
    if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension must be at least 2");
    if (!(G > 0) || !(S >= 0) || !(S < G)) throw Error(ErrorCode::invalid_argument, "need 0 <= |S| < |G|");
    if (nu.size() > 1) throw Error(ErrorCode::invalid_argument, "at most one weight table");
    if (!nu.empty()) nu.front().validate(G - S);
  }
};

/// Function of the measure variable on [0, |G|].
struct RadialProfile {
  double G = 0.0;
  std::function<double(double)> f;
  std::vector<double> breakpoints;

  double operator()(double s) const { return f(s); }

  MonotoneProfile tabulate(int samples) const {
    std::vector<double> s;
    for (int i = 0; i <= samples; ++i) s.push_back(G * i / samples);
    for (double b : breakpoints)
      if (b > 0 && b < G) s.push_back(b);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    MonotoneProfile p;
    for (double x : s) {
      p.s.push_back(x);
      p.v.push_back(f(x));
    }
    return p;
  }
};

namespace detail {

// ∫_a^b r^{-1+2/n} g(r) dr via ρ = r^{2/n} (removes the endpoint singularity
// at r = 0 for n >= 3): (n/2) ∫ g(ρ^{n/2}) dρ. Splits at `kinks`.
template <class F>
double radial_integral(int n, double a, double b, F&& g, const std::vector<double>& kinks = {}) {
  if (!(b > a)) return 0.0;
  const double e = 2.0 / n;
  std::vector<double> cuts{a};
  for (double k : kinks)
    if (k > a && k < b) cuts.push_back(k);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0, error = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double lo = std::pow(cuts[i], e), hi = std::pow(cuts[i + 1], e);
    double err = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double rho) { return g(std::pow(rho, 0.5 * n)); }, lo, hi, 15, 1e-14, &err);
    total += v;
    error += err;
  }
  total *= 0.5 * n;
  error *= 0.5 * n;
  if (!std::isfinite(total) || error > 1e-12 * std::abs(total) + 1e-300)
    throw Error(ErrorCode::quadrature_failure,
                "radial quadrature error estimate " + std::to_string(error) + " exceeds 1e-12 relative");
  return total;
}

inline double radial_prefactor(int n) { return std::pow(omega_n(n), -2.0 / n) / double(n * n); }

}  // namespace detail

/// V(s) = n⁻² ω_n^{-2/n} ∫_{max(s,|S|)}^{|G|} r^{-1+2/n} ν*(r - |S|)⁻¹ dr.
inline RadialProfile annulus_profile(const RadialSpec& spec) {
  spec.validate();
  RadialProfile p;
  p.G = spec.G;
  p.breakpoints = {spec.S};
  const int n = spec.n;
  const double G = spec.G, S = spec.S;
  if (spec.unit_weight()) {
    const double c = std::pow(omega_n(n), -2.0 / n) / (2.0 * n);
    p.f = [=](double s) {
      double x = std::clamp(std::max(s, S), 0.0, G);
      return c * (std::pow(G, 2.0 / n) - std::pow(x, 2.0 / n));
    };
  } else {
    std::vector<double> kinks;
    for (double x : spec.nu.front().x) kinks.push_back(x + S);
    p.f = [spec, kinks](double s) {
      double x = std::clamp(std::max(s, spec.S), 0.0, spec.G);
      return detail::radial_prefactor(spec.n) *
             detail::radial_integral(spec.n, x, spec.G, [&](double r) { return spec.nu_inverse(r - spec.S); }, kinks);
    };
  }
  return p;
}

/// Torsional rigidity of the symmetrised annulus: n⁻²ω_n^{-2/n} ∫_{|S|}^{|G|} r^{2/n} ν*(r-|S|)⁻¹ dr,
/// i.e. ∫_0^{|G|} V(s) ds. For ν* ≡ 1 and n = 2 this is (|G|² - |S|²)/(8π).
inline double annulus_torsion_exact(const RadialSpec& spec) {
  spec.validate();
  const int n = spec.n;
  if (spec.unit_weight()) {
    double e = (n + 2.0) / n;
    return detail::radial_prefactor(n) * (n / (n + 2.0)) * (std::pow(spec.G, e) - std::pow(spec.S, e));
  }
  std::vector<double> kinks;
  for (double x : spec.nu.front().x) kinks.push_back(x + spec.S);
  return detail::radial_prefactor(n) *
         detail::radial_integral(n, spec.S, spec.G, [&](double r) { return r * spec.nu_inverse(r - spec.S); }, kinks);
}

inline double annulus_torsion_exact(double G, double S, int n = 2) {
  RadialSpec spec;
  spec.n = n;
  spec.G = G;
  spec.S = S;
  return annulus_torsion_exact(spec);
}

/// Piecewise weight ζ⁻¹ on (0, |G|): ν*⁻¹ below μ(c_m), zero across each
/// hole interval, and ν*⁻¹ with the argument shifted back by the hole
/// measures already passed on the intervals in between.
struct ZetaProfile {
  struct Piece {
    double lo, hi;
    bool zero;
    double shift;
  };
  RadialSpec spec;
  std::vector<Piece> pieces;

  double operator()(double r) const {
    for (auto& p : pieces)
      if (r >= p.lo && r < p.hi) return p.zero ? 0.0 : spec.nu_inverse(r - p.shift);
    return 0.0;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (auto& p : pieces) {
      b.push_back(p.lo);
      b.push_back(p.hi);
    }
    return b;
  }

  RadialProfile profile() const {
    RadialProfile p;
    p.G = spec.G;
    p.breakpoints = breakpoints();
    ZetaProfile self = *this;
    p.f = [self](double r) { return self(r); };
    return p;
  }
};

inline ZetaProfile zeta_inverse(const RadialSpec& spec) {
  spec.validate();
  ZetaProfile z;
  z.spec = spec;
  const auto& H = spec.holes;  // H[h-1] is hole h
  const std::size_t m = H.size();
  if (m == 0) {
    z.pieces.push_back({0.0, spec.G, false, 0.0});
    return z;
  }
  double hole_sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!(H[i].measure > 0)) throw Error(ErrorCode::breakpoint_overlap, "hole measures must be positive", int(i));
    if (!(H[i].mu_level >= 0)) throw Error(ErrorCode::breakpoint_overlap, "negative level measure", int(i));
    if (i > 0 && H[i].mu_level > H[i - 1].mu_level)
      throw Error(ErrorCode::breakpoint_overlap, "level measures must satisfy μ(c_m) <= ... <= μ(c_1)", int(i));
    hole_sum += H[i].measure;
  }
  if (std::abs(hole_sum - spec.S) > 1e-9 * spec.G)
    throw Error(ErrorCode::breakpoint_overlap, "hole measures do not add up to |S|");
  if (H[0].mu_level > spec.G - spec.S * (1 + 1e-12))
    throw Error(ErrorCode::breakpoint_overlap, "μ(c_1) exceeds |G| - |S|");

  // tail[h] = Σ_{k>=h} |Ω_k| (1-based h).
  std::vector<double> tail(m + 2, 0.0);
  for (std::size_t h = m; h >= 1; --h) tail[h] = tail[h + 1] + H[h - 1].measure;
  auto mu = [&](std::size_t h) { return h == 0 ? spec.G - spec.S : H[h - 1].mu_level; };

  z.pieces.push_back({0.0, mu(m), false, 0.0});
  z.pieces.push_back({mu(m), mu(m) + H[m - 1].measure, true, 0.0});
  for (std::size_t h = m; h >= 1; --h) {
    if (h < m) z.pieces.push_back({mu(h) + tail[h + 1], mu(h) + tail[h], true, 0.0});  // I_h
    z.pieces.push_back({mu(h) + tail[h], mu(h - 1) + tail[h], false, tail[h]});     // J_h
  }
  std::vector<ZetaProfile::Piece> kept;
  for (auto& p : z.pieces)
    if (p.hi > p.lo) kept.push_back(p);
  z.pieces = kept;
  for (std::size_t i = 1; i < z.pieces.size(); ++i)
    if (z.pieces[i].lo < z.pieces[i - 1].hi - 1e-12 * spec.G)
      throw Error(ErrorCode::breakpoint_overlap, "ζ⁻¹ intervals overlap");
  return z;
}

/// w(s) = n⁻²ω_n^{-2/n} ∫_s^{|G|} r^{-1+2/n} ζ⁻¹(r) dr.
inline RadialProfile pointwise_bound_w(const RadialSpec& spec, const ZetaProfile& zeta) {
  RadialProfile p;
  p.G = spec.G;
  p.breakpoints = zeta.breakpoints();
  const int n = spec.n;
  const double c = detail::radial_prefactor(n);
  auto pieces = zeta.pieces;
  bool unit = spec.unit_weight();
  std::vector<double> kinks;
  if (!unit)
    for (auto& piece : pieces)
      for (double x : spec.nu.front().x) kinks.push_back(x + piece.shift);
  p.f = [=](double s) {
    double total = 0;
    for (auto& piece : pieces) {
      if (piece.zero) continue;
      double a = std::max(piece.lo, s), b = piece.hi;
      if (!(b > a)) continue;
      if (unit)
        total += 0.5 * n * (std::pow(b, 2.0 / n) - std::pow(a, 2.0 / n));
      else
        total += detail::radial_integral(n, a, b, [&](double r) { return spec.nu_inverse(r - piece.shift); }, kinks);
    }
    return c * total;
  };
  return p;
}

struct Counterexample {
  RadialProfile u;
  RadialProfile V;
  double gap = 0.0;  // V(0) - u(0)
};

/// Profiles for Ω = B_1 with a spherical shell S = B_R \ B_r removed, seen
/// through ζ⁻¹: u picks up the inner ball's contribution, V is the annulus
/// profile. The third branch carries the same prefactor as the others (so
/// that u is continuous at s = |B_r|).
inline Counterexample counterexample_profile(int n, double G, double Br, double BR) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "dimension must be at least 2");
  if (!(Br >= 0 && Br <= BR && BR <= G && G > 0))
    throw Error(ErrorCode::invalid_nesting, "need 0 <= |B_r| <= |B_R| <= |G|");
  const double S = BR - Br;
  const double c = std::pow(omega_n(n), -2.0 / n) / (2.0 * n);
  const double e = 2.0 / n;
  Counterexample out;
  out.u.G = G;
  out.u.breakpoints = {Br, BR};
  out.u.f = [=](double s) {
    s = std::clamp(s, 0.0, G);
    if (s >= BR) return c * (std::pow(G, e) - std::pow(s, e));
    if (s > Br) return c * (std::pow(G, e) - std::pow(BR, e));
    return c * (std::pow(G, e) - std::pow(BR, e) + std::pow(Br, e) - std::pow(s, e));
  };
  out.V.G = G;
  out.V.breakpoints = {S};
  out.V.f = [=](double s) {
    s = std::clamp(s, 0.0, G);
    return c * (std::pow(G, e) - std::pow(std::max(s, S), e));
  };
  out.gap = c * (std::pow(Br + S, e) - std::pow(Br, e) - std::pow(S, e));
  return out;
}

/// ∫_0^r (V - u) ds for two profiles (negative values contradict a mass
/// concentration comparison u ≺ V).
inline double concentration_difference(const RadialProfile& V, const RadialProfile& u, double r) {
  std::vector<double> cuts{0.0, r};
  for (double b : V.breakpoints)
    if (b > 0 && b < r) cuts.push_back(b);
  for (double b : u.breakpoints)
    if (b > 0 && b < r) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double s) { return V(s) - u(s); }, cuts[i], cuts[i + 1], 15, 1e-13);
  }
  return total;
}

}  // namespace torsionlab
