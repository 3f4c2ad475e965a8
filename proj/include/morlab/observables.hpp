#pragma once

// Densities, currents, the stress tensor and global functionals of a field,
// conservation-law residuals along a trajectory, and space-time norms.

#include <cmath>
#include <optional>
#include <vector>

#include "morlab/exponents.hpp"
#include "morlab/interaction.hpp"
#include "morlab/propagator.hpp"
#include "morlab/spectral.hpp"

namespace morlab {

/// j = Im(conj(u) grad u).
inline std::vector<RealField> current(const ComplexField& u) {
  std::vector<RealField> j;
  for (const auto& du : gradient(u)) {
    RealField ja(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) ja[i] = (std::conj(u[i]) * du[i]).imag();
    j.push_back(std::move(ja));
  }
  return j;
}

inline double energy(const ComplexField& u, const Model& model) {
  double kinetic = 0.0;
  for (const auto& du : gradient(u))
    for (const auto& v : du.values) kinetic += std::norm(v);
  kinetic *= 0.5 * u.grid.cell_volume();
  if (model.is_free()) return kinetic;
  return kinetic + integral(G_of_rho(model, density(u)));
}

struct ObservableFrame {
  double t = 0.0;
  RealField rho;
  std::vector<RealField> j;
  std::vector<std::vector<RealField>> T;  // filled on demand
  double mass = 0.0;
  std::vector<double> momentum;
  double energy = 0.0;
};

/// T_kl = Re(d_k conj(u) d_l u) - delta_kl ((1/4) Lap rho - rho g + G).
inline std::vector<std::vector<RealField>> stress_tensor(const ComplexField& u,
                                                         const Model& model) {
  const GridSpec& g = u.grid;
  const int n = g.dim;
  const RealField rho = density(u);
  const RealField lap = laplacian(rho);
  RealField iso(g);
  RealField pot(g);
  if (!model.is_free()) pot = rho_g_minus_G(model, rho);
  for (std::size_t i = 0; i < g.size(); ++i) iso[i] = 0.25 * lap[i] - pot[i];
  const auto du = gradient(u);
  std::vector<std::vector<RealField>> T(n, std::vector<RealField>(n, RealField(g)));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (std::size_t i = 0; i < g.size(); ++i) {
        T[k][l][i] = (std::conj(du[k][i]) * du[l][i]).real() - (k == l ? iso[i] : 0.0);
      }
  return T;
}

inline ObservableFrame frame(const ComplexField& u, const Model& model, double t = 0.0,
                             bool with_stress = false) {
  ObservableFrame f;
  f.t = t;
  f.rho = density(u);
  f.j = current(u);
  f.mass = integral(f.rho);
  for (const auto& ja : f.j) f.momentum.push_back(integral(ja));
  f.energy = energy(u, model);
  if (with_stress) f.T = stress_tensor(u, model);
  return f;
}

struct ContinuityResidual {
  double scalar_res = 0.0;  // ||d_t rho + div j||_2
  double vector_res = 0.0;  // ||d_t j + div Re(grad u grad u) - grad((1/4) Lap rho - rho g + G)||_2
};

/// Residuals of the local conservation laws at recorded frame `index`, with
/// d_t by centered differences over the neighbouring frames.
inline ContinuityResidual continuity_residual(const TrajectoryRecord& traj, std::size_t index,
                                              const Model& model) {
  require(index >= 1 && index + 1 < traj.size(), "residual needs a frame on each side");
  const ComplexField& u = traj.snapshots[index];
  const GridSpec& g = u.grid;
  const int n = g.dim;
  const double span = traj.times[index + 1] - traj.times[index - 1];

  const RealField rho_prev = density(traj.snapshots[index - 1]);
  const RealField rho_next = density(traj.snapshots[index + 1]);
  const auto j = current(u);
  const auto j_prev = current(traj.snapshots[index - 1]);
  const auto j_next = current(traj.snapshots[index + 1]);

  RealField scalar(g);
  const RealField divj = divergence(j);
  for (std::size_t i = 0; i < g.size(); ++i)
    scalar[i] = (rho_next[i] - rho_prev[i]) / span + divj[i];

  // Isotropic part as a potential whose gradient enters d_t j.
  const RealField rho = density(u);
  const RealField lap_rho = laplacian(rho);
  RealField iso(g);
  for (std::size_t i = 0; i < g.size(); ++i) iso[i] = 0.25 * lap_rho[i];
  std::vector<RealField> force;  // -rho grad g for Hartree, else folded into iso
  if (model.kind() == ModelKind::Power) {
    const RealField pot = rho_g_minus_G(model, rho);
    for (std::size_t i = 0; i < g.size(); ++i) iso[i] -= pot[i];
  } else if (model.kind() == ModelKind::Hartree) {
    auto ops = model.hartree_operators(g);
    for (int a = 0; a < n; ++a) {
      RealField dg = ops->grad_v[a].apply(ops->lattice, rho);
      for (std::size_t i = 0; i < g.size(); ++i) dg[i] *= -rho[i];
      force.push_back(std::move(dg));
    }
  }
  const auto du = gradient(u);
  const auto grad_iso = gradient(iso);
  double vec_sq = 0.0;
  for (int a = 0; a < n; ++a) {
    std::vector<RealField> row;
    for (int b = 0; b < n; ++b) {
      RealField s(g);
      for (std::size_t i = 0; i < g.size(); ++i) s[i] = (std::conj(du[b][i]) * du[a][i]).real();
      row.push_back(std::move(s));
    }
    const RealField div_row = divergence(row);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double r = (j_next[a][i] - j_prev[a][i]) / span + div_row[i] - grad_iso[a][i];
      if (!force.empty()) r -= force[a][i];
      vec_sq += r * r;
    }
  }
  return {lp_norm(scalar, 2.0), std::sqrt(vec_sq * g.cell_volume())};
}

/// Trapezoid rule in t.
inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  require(t.size() == f.size(), "trapezoid: length mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return s;
}

/// || ||omega^sigma u(t)||_r ||_{L^q(t)} over the recorded frames.
inline double spacetime_norm(const std::vector<double>& times,
                             const std::vector<ComplexField>& frames, double q, double r,
                             double sigma) {
  require(!frames.empty(), "space-time norm of an empty trajectory");
  require(q >= 1.0 && r >= 1.0 && sigma >= 0.0, "space-time norm needs q, r >= 1, sigma >= 0");
  std::vector<double> v;
  v.reserve(frames.size());
  for (const auto& f : frames) v.push_back(sobolev_norm(f, sigma, r));
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
  }
  if (frames.size() == 1) return 0.0;
  for (auto& x : v) x = std::pow(x, q);
  return std::pow(trapezoid(times, v), 1.0 / q);
}

inline double spacetime_norm(const TrajectoryRecord& traj, double q, double r, double sigma) {
  return spacetime_norm(traj.times, traj.snapshots, q, r, sigma);
}

/// ||U(t) v; L^q([-W, W], L^r)|| / ||v||_2 with frames every `step` in t.
inline double strichartz_ratio(const ComplexField& v, const Q& q, const Q& r, double window,
                               double step = 0.05) {
  const Admissibility adm = is_admissible(v.grid.dim, q, r);
  require(adm.admissible, "pair (q, r) is not admissible: " + adm.violated);
  require(window > 0.0 && step > 0.0, "window and step must be positive");
  const double l2 = lp_norm(v, 2.0);
  if (l2 == 0.0) return 0.0;
  const long half = std::lround(window / step);
  std::vector<double> times;
  std::vector<ComplexField> frames;
  for (long i = -half; i <= half; ++i) {
    const double t = static_cast<double>(i) * step;
    times.push_back(t);
    frames.push_back(free_propagate(v, t));
  }
  return spacetime_norm(times, frames, q.to_double(), r.to_double(), 0.0) / l2;
}

}  // namespace morlab
