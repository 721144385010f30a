#pragma once

// P1 finite elements for the torsion problem on Ω = G \ S: -Δu = 1 in Ω,
// u = 0 on ∂G, u ≡ c_i (unknown) on ∂Ω_i. The floating constants are imposed
// by tying every node of a hole boundary to a single master unknown; testing
// the weak form with a function equal to 1 on Ω_i adds |Ω_i| to that
// master's load, which encodes the flux condition.

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "torsionlab/errors.hpp"
#include "torsionlab/field.hpp"
#include "torsionlab/geometry.hpp"
#include "torsionlab/mesh.hpp"

namespace torsionlab {

struct TorsionSystem {
  std::shared_ptr<const Mesh> mesh;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::VectorXd load;
  std::vector<int> dof_of_node;  // -1 for eliminated nodes (outer boundary, hole interiors)
  std::vector<int> master;       // dof index of hole i
  std::vector<double> hole_measure;
  int free_count = 0;

  int ndof() const { return int(load.size()); }
};

struct TorsionSolution {
  std::vector<double> nodal_u;  // every mesh node; hole nodes carry c_i
  std::vector<double> hole_constants;
  Eigen::VectorXd dofs;
  double residual_norm = 0.0;  // relative, ||b - K u|| / ||b||
  int iterations = 0;
  double T = 0.0;              // load . u
  double T_rayleigh = 0.0;     // (load . u)^2 / (u . K u)
  double energy = 0.0;         // u . K u = ∫_Ω |∇u|²
  double min_ritz = 0.0;       // smallest Ritz value of the preconditioned operator
  int ndof = 0;
  double h = 0.0;
};

inline TorsionSystem assemble(std::shared_ptr<const Mesh> mesh, const Domain& d) {
  const Mesh& m = *mesh;
  if (m.hole_count != int(d.hole_count()))
    throw Error(ErrorCode::tag_mismatch, "mesh has " + std::to_string(m.hole_count) + " holes, domain has " +
                                             std::to_string(d.hole_count()));
  TorsionSystem sys;
  sys.mesh = mesh;
  sys.dof_of_node.assign(m.nodes.size(), -1);
  int next = 0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (m.tags[i].kind == NodeKind::interior) sys.dof_of_node[i] = next++;
  sys.free_count = next;
  sys.master.resize(d.hole_count());
  for (std::size_t k = 0; k < d.hole_count(); ++k) {
    sys.master[k] = next++;
    sys.hole_measure.push_back(d.holes()[k].area());
  }
  std::vector<int> seen(d.hole_count(), 0);
  for (std::size_t i = 0; i < m.nodes.size(); ++i)
    if (m.tags[i].kind == NodeKind::hole) {
      int k = m.tags[i].hole;
      if (k < 0 || k >= int(d.hole_count())) throw Error(ErrorCode::tag_mismatch, "node tagged with unknown hole");
      sys.dof_of_node[i] = sys.master[k];
      seen[k]++;
    }
  for (std::size_t k = 0; k < d.hole_count(); ++k)
    if (seen[k] == 0) throw Error(ErrorCode::tag_mismatch, "hole " + std::to_string(k) + " has no mesh nodes");

  sys.load = Eigen::VectorXd::Zero(next);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.triangles.size() * 9);
  for (auto& t : m.triangles) {
    Point p[3] = {m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]};
    double area = 0.5 * orient(p[0], p[1], p[2]);
    double b[3], c[3];
    for (int i = 0; i < 3; ++i) {
      Point q = p[(i + 1) % 3], r = p[(i + 2) % 3];
      b[i] = q.y - r.y;
      c[i] = r.x - q.x;
    }
    for (int i = 0; i < 3; ++i) {
      int di = sys.dof_of_node[t[i]];
      if (di < 0) continue;
      sys.load[di] += area / 3.0;
      for (int j = 0; j < 3; ++j) {
        int dj = sys.dof_of_node[t[j]];
        if (dj < 0) continue;
        trip.emplace_back(di, dj, (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
      }
    }
  }
  for (std::size_t k = 0; k < d.hole_count(); ++k) sys.load[sys.master[k]] += sys.hole_measure[k];
  sys.stiffness.resize(next, next);
  sys.stiffness.setFromTriplets(trip.begin(), trip.end());
  sys.stiffness.makeCompressed();
  return sys;
}

namespace detail {

// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm bisection.
inline double tridiagonal_min_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
  const std::size_t n = diag.size();
  if (n == 0) return 0.0;
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  auto count_below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
      if (q == 0) q = 1e-300;
      q = diag[i] - x - off[i - 1] * off[i - 1] / q;
      if (q < 0) ++count;
    }
    return count;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (count_below(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Jacobi-preconditioned conjugate gradients to relative residual `tol`.
inline TorsionSolution solve(const TorsionSystem& sys, double tol = 1e-10) {
  if (!(tol > 0 && tol <= 1e-6)) throw Error(ErrorCode::invalid_argument, "CG tolerance must lie in (0, 1e-6]");
  const int n = sys.ndof();
  const auto& K = sys.stiffness;
  const Eigen::VectorXd& b = sys.load;
  TorsionSolution sol;
  sol.ndof = n;
  sol.h = sys.mesh->h;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();

  if (bnorm > 0) {
    Eigen::VectorXd inv_diag = K.diagonal().cwiseInverse();
    Eigen::VectorXd r = b, z = inv_diag.cwiseProduct(r), p = z, Kp(n);
    double rz = r.dot(z);
    const int max_iter = std::max(1, int(20.0 * std::sqrt(double(n))));
    std::vector<double> alphas, betas;
    double rel = 1.0;
    int it = 0;
    while (true) {
      rel = r.norm() / bnorm;
      if (rel <= tol) break;
      if (it >= max_iter)
        throw Error(ErrorCode::not_converged, "CG stopped after " + std::to_string(it) +
                                                  " iterations at relative residual " + std::to_string(rel));
      Kp.noalias() = K * p;
      double pKp = p.dot(Kp);
      if (!(pKp > 0)) throw Error(ErrorCode::not_converged, "stiffness matrix is not positive definite");
      double alpha = rz / pKp;
      x += alpha * p;
      r -= alpha * Kp;
      z = inv_diag.cwiseProduct(r);
      double rz_new = z.dot(r);
      double beta = rz_new / rz;
      rz = rz_new;
      p = z + beta * p;
      alphas.push_back(alpha);
      betas.push_back(beta);
      ++it;
    }
    sol.iterations = it;
    sol.residual_norm = (b - K * x).norm() / bnorm;
    // Lanczos tridiagonal recovered from the CG coefficients.
    std::vector<double> diag(alphas.size()), off(alphas.size() > 0 ? alphas.size() - 1 : 0);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      diag[k] = 1.0 / alphas[k] + (k > 0 ? betas[k - 1] / alphas[k - 1] : 0.0);
      if (k + 1 < alphas.size()) off[k] = std::sqrt(betas[k]) / alphas[k];
    }
    sol.min_ritz = detail::tridiagonal_min_eigenvalue(diag, off);
  }

  sol.dofs = x;
  const Mesh& m = *sys.mesh;
  sol.hole_constants.resize(sys.master.size());
  for (std::size_t k = 0; k < sys.master.size(); ++k) sol.hole_constants[k] = x[sys.master[k]];
  sol.nodal_u.assign(m.nodes.size(), 0.0);
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    int d = sys.dof_of_node[i];
    if (d >= 0)
      sol.nodal_u[i] = x[d];
    else if (m.tags[i].kind == NodeKind::hole_interior && m.tags[i].hole >= 0)
      sol.nodal_u[i] = sol.hole_constants[m.tags[i].hole];
  }
  sol.T = b.dot(x);
  sol.energy = x.dot(K * x);
  sol.T_rayleigh = sol.energy > 0 ? sol.T * sol.T / sol.energy : 0.0;
  return sol;
}

/// T = ∫_G ũ = load · u.
inline double torsional_rigidity(const TorsionSolution& sol, const TorsionSystem&) { return sol.T; }

/// Relative gap between the two evaluations of T.
inline double rigidity_self_check(const TorsionSolution& sol) {
  if (sol.T == 0) return 0.0;
  return std::abs(sol.T - sol.T_rayleigh) / std::abs(sol.T);
}

/// ũ on all of G: nodal values on Ω and the constant c_i on hole i.
inline ScalarField extended_field(const TorsionSolution& sol, std::shared_ptr<const Mesh> mesh, const Domain& d) {
  ScalarField f = make_field(std::move(mesh), sol.nodal_u, true);
  for (std::size_t k = 0; k < d.hole_count(); ++k)
    f.plateaus.push_back({sol.hole_constants[k], int(k), d.holes()[k].area()});
  return f;
}

/// u on Ω only (no hole plateaus).
inline ScalarField omega_field(const TorsionSolution& sol, std::shared_ptr<const Mesh> mesh) {
  return make_field(std::move(mesh), sol.nodal_u, false);
}

/// Mesh + assemble + solve in one call.
struct TorsionRun {
  std::shared_ptr<const Mesh> mesh;
  TorsionSystem system;
  TorsionSolution solution;
};

inline TorsionRun solve_torsion(const Domain& d, std::shared_ptr<const Mesh> mesh, double tol = 1e-10) {
  TorsionRun run;
  run.mesh = mesh;
  run.system = assemble(mesh, d);
  run.solution = solve(run.system, tol);
  return run;
}

inline TorsionRun solve_torsion(const Domain& d, double h, double tol = 1e-10) {
  return solve_torsion(d, std::make_shared<const Mesh>(triangulate(d, h)), tol);
}

}  // namespace torsionlab
