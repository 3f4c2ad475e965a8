#pragma once

// Quadratic Morawetz quantities for one field:
//   J = (1/2) <rho, h*rho>,  M = -<rho, grad h * j>,
//   dM/dt = K + P + R with
//   K = (1/2) <grad rho, Lap h * grad rho>,
//   P = <rho, Lap h * (rho g - G)>                (power law)
//     = <rho, grad h * (rho grad (V*rho))>         (Hartree),
//   R = <rho, Hess h * (grad u grad u)> - <u grad u, Hess h * u grad u>.
// <f, g> = integral of conj(f) g.

#include <complex>
#include <vector>

#include "morlab/grid.hpp"
#include "morlab/interaction.hpp"
#include "morlab/kernels.hpp"
#include "morlab/observables.hpp"
#include "morlab/spectral.hpp"

namespace morlab {

inline double quad_J(const RealField& rho, const WeightOperator& op) {
  return 0.5 * inner(rho, op.conv_h(rho));
}

inline double quad_M(const RealField& rho, const std::vector<RealField>& j,
                     const WeightOperator& op) {
  double m = 0.0;
  for (int a = 0; a < op.dim(); ++a) m -= inner(rho, op.conv_grad(a, j[a]));
  return m;
}

inline double kinetic_term(const RealField& rho, const WeightOperator& op) {
  double k = 0.0;
  for (const auto& d : gradient(rho)) k += inner(d, op.conv_lap(d));
  return 0.5 * k;
}

inline double potential_term(const RealField& rho, const Model& model, const WeightOperator& op) {
  if (model.kind() != ModelKind::Power) return 0.0;
  return inner(rho, op.conv_lap(rho_g_minus_G(model, rho)));
}

/// Sum over a of <rho, d_a h * (rho (d_a V * rho))>, with grad V sampled.
inline double hartree_potential_term(const RealField& rho, const Model& model,
                                     const WeightOperator& op) {
  if (model.kind() != ModelKind::Hartree) return 0.0;
  auto ops = model.hartree_operators(rho.grid);
  const auto spec = ops->lattice.spectrum(rho);
  double p = 0.0;
  for (int a = 0; a < op.dim(); ++a) {
    RealField force = ops->grad_v[a].apply_spectrum(ops->lattice, spec, rho);
    for (std::size_t i = 0; i < rho.size(); ++i) force[i] *= rho[i];
    p += inner(rho, op.conv_grad(a, force));
  }
  return p;
}

struct Remainder {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// Two-convolution form of R: n(n+1)/2 kernels against rho and n^2 against
/// the complex currents conj(u) d_b u.
inline Remainder remainder_R(const ComplexField& u, const WeightOperator& op) {
  const GridSpec& g = u.grid;
  const int n = g.dim;
  const auto du = gradient(u);
  const RealField rho = density(u);
  std::vector<ComplexField> w(n, ComplexField(g));
  for (int a = 0; a < n; ++a)
    for (std::size_t i = 0; i < g.size(); ++i) w[a][i] = std::conj(u[i]) * du[a][i];

  Complex total = 0.0;
  const PaddedLattice& lat = op.lattice();
  const auto rho_spec = lat.spectrum(rho);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const RealField hr = op.hess(a, b).apply_spectrum(lat, rho_spec, rho);
      ComplexField prod(g);
      for (std::size_t i = 0; i < g.size(); ++i) prod[i] = std::conj(du[a][i]) * du[b][i];
      // <rho, H*s> = <H*rho, s> for the symmetric kernel.
      Complex term = inner(to_complex(hr), prod);
      if (b != a) {
        for (std::size_t i = 0; i < g.size(); ++i) prod[i] = std::conj(du[b][i]) * du[a][i];
        term += inner(to_complex(hr), prod);
      }
      total += term;
    }
  for (int b = 0; b < n; ++b) {
    const auto wb_spec = lat.spectrum(w[b]);
    for (int a = 0; a < n; ++a) {
      const ComplexField hw = op.hess(a, b).apply_spectrum(lat, wb_spec, w[b]);
      total -= inner(w[a], hw);
    }
  }
  return {total.real(), total.imag()};
}

struct RateTerms {
  double K = 0.0;
  double P = 0.0;
  Remainder R;
  double rate() const { return K + P + R.value; }
  double scale() const { return std::abs(K) + std::abs(P) + std::abs(R.value); }
};

inline RateTerms nls_rate(const ComplexField& u, const Model& model, const WeightOperator& op) {
  const RealField rho = density(u);
  RateTerms t;
  t.K = kinetic_term(rho, op);
  t.P = potential_term(rho, model, op);
  t.R = remainder_R(u, op);
  return t;
}

inline RateTerms hartree_rate(const ComplexField& u, const Model& model,
                              const WeightOperator& op) {
  const RealField rho = density(u);
  RateTerms t;
  t.K = kinetic_term(rho, op);
  t.P = hartree_potential_term(rho, model, op);
  t.R = remainder_R(u, op);
  return t;
}

inline RateTerms rate_terms(const ComplexField& u, const Model& model, const WeightOperator& op) {
  return model.kind() == ModelKind::Hartree ? hartree_rate(u, model, op)
                                            : nls_rate(u, model, op);
}

struct MorawetzSample {
  double t = 0.0;
  double J = 0.0;
  double M = 0.0;
  double K = 0.0;
  double P = 0.0;
  double R = 0.0;
  double R_imag = 0.0;
  double rate = 0.0;
};

inline MorawetzSample morawetz_sample(const ComplexField& u, const Model& model,
                                      const WeightOperator& op, double t = 0.0) {
  const RealField rho = density(u);
  MorawetzSample s;
  s.t = t;
  s.J = quad_J(rho, op);
  s.M = quad_M(rho, current(u), op);
  const RateTerms terms = rate_terms(u, model, op);
  s.K = terms.K;
  s.P = terms.P;
  s.R = terms.R.value;
  s.R_imag = terms.R.imag_residue;
  s.rate = s.K + s.P + s.R;
  return s;
}

/// |M| / (||u||_2^2 ||u; H^{1/2}||^2), 0 for u = 0.
inline double h12_bound_check(const ComplexField& u, const WeightOperator& op) {
  const double mass = lp_norm(u, 2.0);
  const double half = sobolev_norm(u, 0.5, 2.0);
  const double denom = mass * mass * half * half;
  if (denom == 0.0) return 0.0;
  return std::abs(quad_M(density(u), current(u), op)) / denom;
}

}  // namespace morlab
