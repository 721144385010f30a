#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace torsionlab {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  double simplex_diameter = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free minimisation. Terminates when the simplex diameter drops
/// below `x_tol` or after `max_evals` objective calls. Fully deterministic:
/// ties in the vertex ordering are broken by vertex index.
template <class F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, double initial_step,
                             double x_tol, int max_evals = 4000) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += initial_step;

  NelderMeadResult out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d = std::max(d, std::abs(simplex[i][j] - simplex[0][j]));
    return d;
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      for (auto i : order) {
        s2.push_back(simplex[i]);
        v2.push_back(values[i]);
      }
      simplex.swap(s2);
      values.swap(v2);
    }
    if (diameter() <= x_tol) {
      out.converged = true;
      break;
    }
    if (out.evaluations >= max_evals) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);

    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (simplex[n][j] - centroid[j]);
      return x;
    };

    auto xr = along(-1.0);
    double fr = eval(xr);
    if (fr < values[0]) {
      auto xe = along(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else {
      bool outside = fr < values[n];
      auto xc = along(outside ? -0.5 : 0.5);
      double fc = eval(xc);
      if (fc < (outside ? fr : values[n])) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
          values[i] = eval(simplex[i]);
        }
      }
    }
  }
  out.x = simplex[0];
  out.value = values[0];
  out.simplex_diameter = diameter();
  return out;
}

}  // namespace torsionlab
