#pragma once

// Bilinear rate for two fields, the rate density of the original
// (linear in rho) Morawetz quantity, the one-dimensional focusing margin and
// the L^6 L^inf bound in one dimension.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "morlab/morawetz.hpp"
#include "morlab/propagator.hpp"

namespace morlab {

struct BilinearRate {
  double J = 0.0;  // (1/2) <rho1, h*rho2>
  double M = 0.0;  // -(1/2)(<rho1, grad h*j2> + <rho2, grad h*j1>)
  double K = 0.0;  // (1/2) <grad rho1, Lap h*grad rho2>
  double P = 0.0;  // (1/2)(<rho1, Lap h*(rho2 g2 - G2)> + (1 <-> 2))
  double R = 0.0;
  double R_imag = 0.0;
  double rate() const { return K + P + R; }
};

namespace detail {

/// Sum over a, b of <rho_x, H_ab * (conj(d_a v) d_b v)>.
inline Complex hess_density_pair(const RealField& rho, const std::vector<ComplexField>& dv,
                                 const WeightOperator& op) {
  const PaddedLattice& lat = op.lattice();
  const auto spec = lat.spectrum(rho);
  const int n = op.dim();
  Complex total = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const ComplexField hr = to_complex(op.hess(a, b).apply_spectrum(lat, spec, rho));
      ComplexField prod(rho.grid);
      for (std::size_t i = 0; i < rho.size(); ++i) prod[i] = std::conj(dv[a][i]) * dv[b][i];
      total += inner(hr, prod);
      if (b != a) {
        for (std::size_t i = 0; i < rho.size(); ++i) prod[i] = std::conj(dv[b][i]) * dv[a][i];
        total += inner(hr, prod);
      }
    }
  return total;
}

inline std::vector<ComplexField> weighted_gradient(const ComplexField& u,
                                                   const std::vector<ComplexField>& du) {
  std::vector<ComplexField> w;
  for (const auto& d : du) {
    ComplexField wa(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) wa[i] = std::conj(u[i]) * d[i];
    w.push_back(std::move(wa));
  }
  return w;
}

}  // namespace detail

inline BilinearRate bilinear_rate(const ComplexField& u1, const ComplexField& u2,
                                  const Model& model, const WeightOperator& op) {
  require_same_grid(u1, u2);
  require(u1.grid == op.grid(), "weight operator built on another grid");
  const int n = op.dim();
  const PaddedLattice& lat = op.lattice();
  const RealField rho1 = density(u1), rho2 = density(u2);
  const auto j1 = current(u1), j2 = current(u2);
  BilinearRate out;
  out.J = 0.5 * inner(rho1, op.conv_h(rho2));
  for (int a = 0; a < n; ++a)
    out.M -= 0.5 * (inner(rho1, op.conv_grad(a, j2[a])) + inner(rho2, op.conv_grad(a, j1[a])));

  const auto g1 = gradient(rho1), g2 = gradient(rho2);
  for (int a = 0; a < n; ++a) out.K += 0.5 * inner(g1[a], op.conv_lap(g2[a]));
  if (model.kind() == ModelKind::Power) {
    out.P = 0.5 * (inner(rho1, op.conv_lap(rho_g_minus_G(model, rho2))) +
                   inner(rho2, op.conv_lap(rho_g_minus_G(model, rho1))));
  }

  const auto du1 = gradient(u1), du2 = gradient(u2);
  Complex r = 0.5 * (detail::hess_density_pair(rho1, du2, op) +
                     detail::hess_density_pair(rho2, du1, op));
  const auto w1 = detail::weighted_gradient(u1, du1);
  const auto w2 = detail::weighted_gradient(u2, du2);
  Complex cross = 0.0;
  for (int b = 0; b < n; ++b) {
    const auto spec = lat.spectrum(w2[b]);
    for (int a = 0; a < n; ++a) cross += inner(w1[a], op.hess(a, b).apply_spectrum(lat, spec, w2[b]));
  }
  r -= cross.real();
  out.R = r.real();
  out.R_imag = r.imag();
  return out;
}

struct OriginalRate {
  RealField hessian_term;    // sum_ab Hess h * Re(d_a conj(u) d_b u)
  RealField bilaplace_term;  // -(1/4) Lap^2 |x| * rho
  RealField potential_term;  // Lap h * (rho g - G)
};

/// Rate density of M0 = -(grad h * j) for h = |x|. The second term is 2 pi rho
/// for n = 3; for n = 2 it is taken as -(1/4) Lap h * Lap rho.
inline OriginalRate original_morawetz_rate(const ComplexField& u, const Model& model,
                                           const WeightOperator& op) {
  const GridSpec& g = u.grid;
  require(g.dim >= 2, "original rate is defined for n >= 2");
  require(op.spec().kind == WeightKind::AbsX, "original rate needs h = |x|");
  require(g == op.grid(), "weight operator built on another grid");
  const int n = g.dim;
  const RealField rho = density(u);
  const auto du = gradient(u);
  OriginalRate out{RealField(g), RealField(g), RealField(g)};
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      RealField s(g);
      const double mult = a == b ? 1.0 : 2.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        s[i] = mult * (std::conj(du[a][i]) * du[b][i]).real();
      const RealField hs = op.conv_hess(a, b, s);
      for (std::size_t i = 0; i < g.size(); ++i) out.hessian_term[i] += hs[i];
    }
  if (n == 3) {
    for (std::size_t i = 0; i < g.size(); ++i) out.bilaplace_term[i] = 2.0 * std::numbers::pi * rho[i];
  } else {
    const RealField v = op.conv_lap(laplacian(rho));
    for (std::size_t i = 0; i < g.size(); ++i) out.bilaplace_term[i] = -0.25 * v[i];
  }
  if (model.kind() == ModelKind::Power) out.potential_term = op.conv_lap(rho_g_minus_G(model, rho));
  return out;
}

struct FocusingMargin {
  double grad_term = 0.0;       // ||rho'||_2^2
  double potential_term = 0.0;  // 2 (p-1)/(p+1) int rho^{(p+3)/2}
  double margin = 0.0;          // grad_term - potential_term = dM/dt
  double ratio = 0.0;           // potential / grad
  double critical_norm = 0.0;   // ||u; H^{sigma_c}||^{p-1}
};

/// n = 1, g = -rho^{(p-1)/2} with p >= 5, h = |x|.
inline FocusingMargin focusing_margin(const ComplexField& u, double p) {
  require(u.grid.dim == 1, "focusing margin is for n = 1");
  require(p >= 5.0, "focusing margin needs p >= 5");
  const RealField rho = density(u);
  FocusingMargin m;
  const RealField d = partial(rho, 0);
  for (double v : d.values) m.grad_term += v * v;
  m.grad_term *= u.grid.dx();
  double s = 0.0;
  for (double r : rho.values) s += std::pow(std::max(r, 0.0), 0.5 * (p + 3.0));
  m.potential_term = 2.0 * (p - 1.0) / (p + 1.0) * s * u.grid.dx();
  m.margin = m.grad_term - m.potential_term;
  m.ratio = m.grad_term > 0.0 ? m.potential_term / m.grad_term : 0.0;
  const double sc = 0.5 - 2.0 / (p - 1.0);
  m.critical_norm = std::pow(sobolev_norm(u, sc, 2.0), p - 1.0);
  return m;
}

struct PointwiseLemma {
  double sup_rho32 = 0.0;  // max rho^{3/2}
  double bound = 0.0;      // (3/4) int rho^{1/2} |rho'|, as (1/2) TV(rho^{3/2})
  double cs_bound = 0.0;   // (3/4) ||rho||_1^{1/2} ||rho'||_2
};

inline PointwiseLemma pointwise_lemma(const ComplexField& u) {
  require(u.grid.dim == 1, "pointwise lemma is for n = 1");
  const RealField rho = density(u);
  PointwiseLemma l;
  const std::size_t N = rho.size();
  double tv = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double a = std::pow(rho[i], 1.5), b = std::pow(rho[(i + 1) % N], 1.5);
    tv += std::abs(b - a);
    l.sup_rho32 = std::max(l.sup_rho32, a);
  }
  l.bound = 0.5 * tv;
  const RealField d = partial(rho, 0);
  double d2 = 0.0;
  for (double v : d.values) d2 += v * v;
  l.cs_bound = 0.75 * std::sqrt(integral(rho)) * std::sqrt(d2 * u.grid.dx());
  return l;
}

/// ||u; L^6 L^inf||^3 / ((3/4) ||u||_2 ||rho; L^2 H^1)) over the frames.
inline double pointwise_1d_bound(const TrajectoryRecord& traj) {
  require(!traj.empty(), "empty trajectory");
  require(traj.grid().dim == 1, "pointwise bound is for n = 1");
  if (traj.size() < 2) return 0.0;
  const double lhs = std::pow(spacetime_norm(traj, 6.0, kInfinity, 0.0), 3.0);
  std::vector<double> d2;
  for (const auto& u : traj.snapshots) {
    const RealField d = partial(density(u), 0);
    double s = 0.0;
    for (double v : d.values) s += v * v;
    d2.push_back(s * u.grid.dx());
  }
  const double rhs = 0.75 * lp_norm(traj.snapshots.front(), 2.0) * std::sqrt(trapezoid(traj.times, d2));
  return rhs > 0.0 ? lhs / rhs : 0.0;
}

}  // namespace morlab
