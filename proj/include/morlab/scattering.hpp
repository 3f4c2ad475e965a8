#pragma once

// Interaction picture v(t) = U(-t) u(t), convergence of v as t grows, and
// the Duhamel problem with data prescribed at t = +infinity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "morlab/propagator.hpp"
#include "morlab/spectral.hpp"

namespace morlab {

inline std::vector<ComplexField> interaction_picture(const TrajectoryRecord& traj) {
  std::vector<ComplexField> v;
  v.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    v.push_back(free_propagate(traj.snapshots[i], -traj.times[i]));
  return v;
}

inline double h1_distance(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  ComplexField d = a;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b[i];
  return h1_norm(d);
}

struct ScatterReport {
  std::vector<double> times;            // all recorded times
  std::vector<std::size_t> selected;    // frame indices used in the Cauchy matrix
  std::vector<std::vector<double>> cauchy_matrix;
  std::vector<double> distance_to_last; // d(t_i, T_max) for every frame
  ComplexField u_plus;
  double tail_sup = 0.0;
  double decay_exponent = 0.0;          // least-squares slope of -log d vs log t on the tail
  double threshold = 0.0;
  bool converged = false;
};

inline ScatterReport scatter_verdict(const TrajectoryRecord& traj, double threshold,
                                     std::size_t matrix_size = 16) {
  require(!traj.empty(), "empty trajectory");
  require(threshold > 0.0, "threshold must be positive");
  const double t_max = traj.times.back();
  require(t_max - traj.times.front() >= 10.0, "scattering probe needs a window of length >= 10");
  ScatterReport rep;
  rep.times = traj.times;
  rep.threshold = threshold;
  const auto v = interaction_picture(traj);
  rep.u_plus = v.back();
  for (const auto& f : v) rep.distance_to_last.push_back(h1_distance(f, rep.u_plus));

  const std::size_t m = std::min(std::max<std::size_t>(matrix_size, 2), v.size());
  for (std::size_t s = 0; s < m; ++s)
    rep.selected.push_back(s * (v.size() - 1) / (m - 1));
  rep.cauchy_matrix.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double d = h1_distance(v[rep.selected[a]], v[rep.selected[b]]);
      rep.cauchy_matrix[a][b] = rep.cauchy_matrix[b][a] = d;
    }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (traj.times[i] < 0.5 * t_max) continue;
    const double d = rep.distance_to_last[i];
    rep.tail_sup = std::max(rep.tail_sup, d);
    if (traj.times[i] > 0.0 && d > 0.0 && i + 1 < v.size()) {
      const double x = std::log(traj.times[i]), y = -std::log(d);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++cnt;
    }
  }
  if (cnt >= 2 && cnt * sxx - sx * sx > 0.0) rep.decay_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.converged = rep.tail_sup <= threshold;
  return rep;
}

struct WaveOperatorResult {
  ComplexField u_T;
  double T = 0.0;
  double horizon = 0.0;
  int iterations = 0;
  int retries = 0;
  double defect = 0.0;         // last successive-iterate H^1 difference
  double tail_estimate = 0.0;  // neglected integral beyond the horizon, from the integrand decay
  bool converged = false;
};

struct WaveOperatorOptions {
  double horizon = 20.0;
  double step = 0.05;
  int max_iterations = 60;
  int max_retries = 3;
};

/// Fixed point of v(t) = u_plus + i int_t^{T+horizon} U(-s) g(|u(s)|^2) u(s) ds,
/// u(s) = U(s) v(s), on a uniform grid with the trapezoid rule. On
/// divergence T is doubled and the iteration restarts.
inline WaveOperatorResult wave_operator_solve(const ComplexField& u_plus, double T, const Model& model,
                                              double tol, const WaveOperatorOptions& opt = {}) {
  require(all_finite(u_plus), "asymptotic state is not finite");
  require(tol > 0.0 && opt.horizon > 0.0 && opt.step > 0.0, "tolerance, horizon and step must be positive");
  WaveOperatorResult res;
  res.horizon = opt.horizon;
  if (model.is_free()) {
    res.T = T;
    res.u_T = free_propagate(u_plus, T);
    res.converged = true;
    return res;
  }
  const long M = std::max(1L, std::lround(opt.horizon / opt.step));
  const double h = opt.horizon / static_cast<double>(M);
  for (res.retries = 0; res.retries <= opt.max_retries; ++res.retries, T *= 2.0) {
    res.T = T;
    std::vector<ComplexField> w(M + 1, u_plus);
    std::vector<ComplexField> f(M + 1, ComplexField(u_plus.grid));
    double prev = std::numeric_limits<double>::infinity();
    bool diverged = false;
    for (res.iterations = 1; res.iterations <= opt.max_iterations; ++res.iterations) {
      for (long m = 0; m <= M; ++m) {
        const double t = T + static_cast<double>(m) * h;
        const ComplexField u = free_propagate(w[m], t);
        const RealField g = g_of_rho(model, density(u));
        ComplexField gu = u;
        for (std::size_t i = 0; i < gu.size(); ++i) gu[i] *= g[i];
        f[m] = free_propagate(gu, -t);
      }
      double diff = 0.0;
      ComplexField acc(u_plus.grid);
      for (long m = M; m >= 0; --m) {
        if (m < M)
          for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += 0.5 * h * (f[m][i] + f[m + 1][i]);
        ComplexField next = u_plus;
        for (std::size_t i = 0; i < next.size(); ++i) next[i] += Complex(0.0, 1.0) * acc[i];
        diff = std::max(diff, h1_distance(next, w[m]));
        w[m] = std::move(next);
      }
      res.defect = diff;
      if (!std::isfinite(diff) || (res.iterations > 2 && diff > prev)) {
        diverged = true;
        break;
      }
      prev = diff;
      if (diff <= tol) break;
    }
    if (!diverged && res.defect <= tol) {
      res.converged = true;
      res.u_T = free_propagate(w[0], T);
      const double fe = h1_norm(f[M]), fm = h1_norm(f[M / 2]);
      const double te = T + opt.horizon, tm = T + 0.5 * opt.horizon;
      if (fe == 0.0) {
        res.tail_estimate = 0.0;
      } else {
        const double a = fm > fe ? std::log(fm / fe) / std::log(te / tm) : 0.0;
        res.tail_estimate = a > 1.0 ? fe * te / (a - 1.0) : std::numeric_limits<double>::infinity();
      }
      return res;
    }
    if (res.retries == opt.max_retries) {
      res.u_T = free_propagate(w[0], T);
      return res;
    }
  }
  return res;
}

}  // namespace morlab
