#pragma once

// Free evolution U(t) = exp(i t Laplacian / 2) and the Strang split step
//   U(dt/2) o [u -> exp(-i g(|u|^2) dt) u] o U(dt/2).

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "morlab/interaction.hpp"
#include "morlab/spectral.hpp"

namespace morlab {

inline ComplexField free_propagate(const ComplexField& u, double t) {
  if (t == 0.0) return u;
  return apply_symbol(u, [t](const std::array<double, 3>& k, const std::array<int, 3>&) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    return std::polar(1.0, -0.5 * t * k2);
  });
}

/// Pure phase flow of the nonlinearity over dt. |u| is invariant along
/// it, so g is evaluated once (for Hartree, V*rho is frozen).
inline ComplexField nonlinear_phase(const ComplexField& u, double dt, const Model& model) {
  if (model.is_free()) return u;
  RealField g = g_of_rho(model, density(u));
  ComplexField out = u;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] *= std::polar(1.0, -g[i] * dt);
  return out;
}

/// One Strang step. Throws BlowUp (stamped with `t_after`) when the result
/// is non-finite or its sup norm exceeds `blowup_threshold`.
inline ComplexField strang_step(const ComplexField& u, double dt, const Model& model,
                                double blowup_threshold = std::numeric_limits<double>::infinity(),
                                double t_after = 0.0) {
  ComplexField out;
  if (model.is_free()) {
    out = free_propagate(u, dt);
  } else {
    out = free_propagate(nonlinear_phase(free_propagate(u, 0.5 * dt), dt, model), 0.5 * dt);
  }
  const double sup = sup_norm(out);
  if (!all_finite(out) || !(sup <= blowup_threshold)) throw BlowUp(t_after, sup);
  return out;
}

struct StepperConfig {
  double t0 = 0.0;
  double t1 = 1.0;
  double dt = 1e-3;
  int record_stride = 10;
  double blowup_threshold = 1e6;

  void validate() const {
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    require(t0 < t1, "time window must have t0 < t1");
    require(record_stride >= 1, "record stride must be >= 1");
    require(blowup_threshold > 0.0, "blow-up threshold must be positive");
  }

  /// Number of steps: the window length over dt, rounded to the nearest
  /// integer (the last step lands on t1 up to rounding of dt).
  long steps() const { return std::lround((t1 - t0) / dt); }
};

/// Fraction of the L^2 mass in the outer shell max_a |x_a| >= 0.9 L.
inline double boundary_mass(const ComplexField& u) {
  const GridSpec& g = u.grid;
  double outer = 0.0, total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = std::norm(u[i]);
    total += r;
    const auto x = g.position(i);
    double m = 0.0;
    for (int a = 0; a < g.dim; ++a) m = std::max(m, std::abs(x[a]));
    if (m >= 0.9 * g.half_length) outer += r;
  }
  return total > 0.0 ? outer / total : 0.0;
}

constexpr double kBoundaryMassLimit = 1e-6;

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<double> boundary_mass;
  std::vector<std::string> warnings;
  std::optional<BlowUp> blowup;
  double dt = 0.0;
  int record_stride = 1;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const GridSpec& grid() const { return snapshots.front().grid; }
  double max_boundary_mass() const {
    double m = 0.0;
    for (double b : boundary_mass) m = std::max(m, b);
    return m;
  }
};

/// Called at each recorded frame with (index, t, u).
using Observer = std::function<void(std::size_t, double, const ComplexField&)>;

inline TrajectoryRecord propagate(const ComplexField& u0, const StepperConfig& config,
                                  const Model& model, const std::vector<Observer>& observers = {}) {
  config.validate();
  require(all_finite(u0), "initial data is not finite");
  TrajectoryRecord rec;
  rec.dt = config.dt;
  rec.record_stride = config.record_stride;
  bool warned = false;
  auto record = [&](double t, const ComplexField& u) {
    const double b = boundary_mass(u);
    rec.times.push_back(t);
    rec.snapshots.push_back(u);
    rec.boundary_mass.push_back(b);
    if (b > kBoundaryMassLimit && !warned) {
      warned = true;
      rec.warnings.push_back("boundary mass " + std::to_string(b) + " at t=" + std::to_string(t) +
                             " exceeds " + std::to_string(kBoundaryMassLimit));
    }
    for (const auto& obs : observers) obs(rec.times.size() - 1, t, u);
  };

  ComplexField u = u0;
  record(config.t0, u);
  const long steps = config.steps();
  for (long s = 1; s <= steps; ++s) {
    const double t = config.t0 + static_cast<double>(s) * config.dt;
    try {
      u = strang_step(u, config.dt, model, config.blowup_threshold, t);
    } catch (const BlowUp& e) {
      rec.blowup = e;
      break;
    }
    if (s % config.record_stride == 0) record(t, u);
  }
  return rec;
}

}  // namespace morlab
