#pragma once

// Measured ratios for the interpolation and product inequalities used by
// the exponent plans. Constants are not known; these are reported, not
// asserted against a fixed C.

#include <cmath>
#include <vector>

#include "morlab/exponents.hpp"
#include "morlab/observables.hpp"

namespace morlab {

struct InterpProbe {
  double lhs = 0.0;         // ||u; L^k L^ell||
  double morawetz = 0.0;    // L^4 L^8 (n=2), L^4 L^4 (n=3), ||rho; L^2 H^1||^(1/2) (n=1)
  double energy = 0.0;      // ||u; L^inf H^sigma||
  double ratio = 0.0;       // lhs / (morawetz^theta energy^(1-theta))
  double density_norm = 0.0;  // ||rho; L^2 H^{(3-n)/2}||
};

inline InterpProbe interp_norm_probe(const TrajectoryRecord& traj, const ExponentPlan& plan) {
  require(plan.valid, "interpolation probe needs a valid plan: " + plan.reason);
  require(!traj.empty(), "empty trajectory");
  const int n = traj.grid().dim;
  require(plan.n == n, "plan dimension does not match the trajectory");
  require(n <= 3, "probe is implemented for n <= 3");
  InterpProbe out;
  const double k = plan.k.to_double();
  const double ell = plan.ell.to_double();
  const double sigma = plan.sigma.to_double();
  const double theta = plan.theta.to_double();
  out.lhs = spacetime_norm(traj, k, ell, 0.0);
  out.energy = spacetime_norm(traj, kInfinity, 2.0, sigma);

  std::vector<ComplexField> rho;
  for (const auto& u : traj.snapshots) rho.push_back(to_complex(density(u)));
  out.density_norm = spacetime_norm(traj.times, rho, 2.0, 2.0, 0.5 * (3 - n));
  switch (n) {
    case 1: out.morawetz = std::sqrt(out.density_norm); break;
    case 2: out.morawetz = spacetime_norm(traj, 4.0, 8.0, 0.0); break;
    default: out.morawetz = spacetime_norm(traj, 4.0, 4.0, 0.0); break;
  }
  const double denom = std::pow(out.morawetz, theta) * std::pow(out.energy, 1.0 - theta);
  out.ratio = denom > 0.0 ? out.lhs / denom : 0.0;
  return out;
}

/// ||rho; H^sigma_{(2/r - sigma)^-1}|| / ||u; H^sigma_r||^2 for one field.
inline double leibniz_ratio(const ComplexField& u, const Q& sigma, const Q& r) {
  const LeibnizExponent e = leibniz_exponent_check(sigma, r);
  const double s = sigma.to_double();
  const double rhs = sobolev_norm(u, s, r.to_double());
  if (rhs == 0.0) return 0.0;
  const double lhs = sobolev_norm(density(u), s, e.target.to_double());
  return lhs / (rhs * rhs);
}

}  // namespace morlab
