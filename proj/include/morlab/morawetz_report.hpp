#pragma once

// Morawetz diagnostics along a trajectory: the integrated identity, the
// a priori bounds on M, the fitted Riesz constant of the kinetic term and
// the monotonicity checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "morlab/morawetz.hpp"
#include "morlab/propagator.hpp"

namespace morlab {

struct MorawetzReport {
  std::vector<MorawetzSample> samples;
  double rate_integral = 0.0;
  double m_change = 0.0;
  double identity_residual = 0.0;   // |int rate dt - (M(T) - M(0))|
  double identity_relative = 0.0;   // residual / int (|K| + |P| + |R|) dt
  double max_imag_residue = 0.0;    // max |Im R| / scale
  double bound_ratio_228 = 0.0;     // |int rate dt| / (2 ||u||_2^3 sup ||grad u||_2)
  double bound_ratio_a11 = 0.0;     // max |M| / (||u||_2^2 ||u; H^{1/2}||^2)
  double fitted_c = 0.0;
  double fitted_c_deviation = 0.0;  // max relative spread of 2K / ||rho; H^{(3-n)/2}||^2
  bool m_nondecreasing = true;
  double min_term_ratio = 0.0;      // min over frames and K, P, R of term / scale
};

/// Constant c with <grad rho, Lap|x| * grad rho> = c ||rho; H^{(3-n)/2}||^2
/// in the continuum.
inline double riesz_constant(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    default: return 8.0 * std::numbers::pi;
  }
}

inline MorawetzReport integrated_identity(const TrajectoryRecord& traj, const Model& model,
                                          const WeightOperator& op) {
  require(traj.size() >= 3, "integrated identity needs at least 3 frames");
  MorawetzReport rep;
  const int n = op.dim();
  std::vector<double> t, rate, term_size;
  double sum_ks = 0.0, sum_ss = 0.0, sup_grad = 0.0;
  std::vector<double> ratios;
  const double mass = lp_norm(traj.snapshots.front(), 2.0);
  const bool radial = op.spec().kind == WeightKind::AbsX;
  rep.min_term_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const ComplexField& u = traj.snapshots[i];
    const MorawetzSample s = morawetz_sample(u, model, op, traj.times[i]);
    rep.samples.push_back(s);
    t.push_back(s.t);
    rate.push_back(s.rate);
    const double scale = std::abs(s.K) + std::abs(s.P) + std::abs(s.R);
    term_size.push_back(scale);
    if (scale > 0.0) {
      rep.max_imag_residue = std::max(rep.max_imag_residue, std::abs(s.R_imag) / scale);
      rep.min_term_ratio = std::min({rep.min_term_ratio, s.K / scale, s.P / scale, s.R / scale});
    }
    sup_grad = std::max(sup_grad, gradient_norm(u));

    const double half = sobolev_norm(u, 0.5, 2.0);
    if (mass > 0.0 && half > 0.0)
      rep.bound_ratio_a11 = std::max(rep.bound_ratio_a11, std::abs(s.M) / (mass * mass * half * half));

    if (radial) {
      const double sn = sobolev_norm(density(u), 0.5 * (3 - n), 2.0);
      const double S = sn * sn;
      if (S > 0.0) {
        sum_ks += 2.0 * s.K * S;
        sum_ss += S * S;
        ratios.push_back(2.0 * s.K / S);
      }
    }
    if (i > 0 && s.M < rep.samples[i - 1].M) rep.m_nondecreasing = false;
  }
  if (!std::isfinite(rep.min_term_ratio)) rep.min_term_ratio = 0.0;
  rep.rate_integral = trapezoid(t, rate);
  rep.m_change = rep.samples.back().M - rep.samples.front().M;
  rep.identity_residual = std::abs(rep.rate_integral - rep.m_change);
  const double size_int = trapezoid(t, term_size);
  rep.identity_relative = size_int > 0.0 ? rep.identity_residual / size_int : 0.0;
  const double denom = 2.0 * mass * mass * mass * sup_grad;
  rep.bound_ratio_228 = denom > 0.0 ? std::abs(rep.rate_integral) / denom : 0.0;
  if (sum_ss > 0.0) {
    rep.fitted_c = sum_ks / sum_ss;
    for (double r : ratios)
      rep.fitted_c_deviation = std::max(rep.fitted_c_deviation, std::abs(r - rep.fitted_c) / rep.fitted_c);
  }
  return rep;
}

inline MorawetzReport integrated_identity(const TrajectoryRecord& traj, const Model& model,
                                          const WeightSpec& weight = WeightSpec::abs_x(),
                                          KernelMode mode = KernelMode::Spectral) {
  require(!traj.empty(), "empty trajectory");
  const WeightOperator op(weight, traj.grid(), mode);
  return integrated_identity(traj, model, op);
}

}  // namespace morlab
