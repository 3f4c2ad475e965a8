#pragma once

// Morawetz weights h and their derivatives, as closed forms evaluated at a
// point. Three families: h = |x|, h = |theta.x|, h = |Px|.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "morlab/grid.hpp"

namespace morlab {

enum class WeightKind { AbsX, Directional, Projection };

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct WeightSpec {
  WeightKind kind = WeightKind::AbsX;
  Vec3 theta{1.0, 0.0, 0.0};  // Directional
  Mat3 projection{};          // Projection

  static WeightSpec abs_x() { return {}; }
  static WeightSpec directional(const Vec3& theta) {
    WeightSpec w;
    w.kind = WeightKind::Directional;
    w.theta = theta;
    return w;
  }
  static WeightSpec projector(const Mat3& P) {
    WeightSpec w;
    w.kind = WeightKind::Projection;
    w.projection = P;
    return w;
  }

  /// Rank of the projector (trace, rounded).
  int rank(int dim) const {
    double tr = 0.0;
    for (int a = 0; a < dim; ++a) tr += projection[a][a];
    return static_cast<int>(std::lround(tr));
  }

  void validate(int dim) const {
    if (kind == WeightKind::Directional) {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) s += theta[a] * theta[a];
      for (int a = dim; a < 3; ++a)
        require(theta[a] == 0.0, "direction has components beyond the grid dimension");
      require(std::abs(std::sqrt(s) - 1.0) <= 1e-12, "direction must be a unit vector");
    } else if (kind == WeightKind::Projection) {
      const auto& P = projection;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          require(std::abs(P[a][b] - P[b][a]) <= 1e-12, "projection must be symmetric");
          double sq = 0.0;
          for (int c = 0; c < dim; ++c) sq += P[a][c] * P[c][b];
          require(std::abs(sq - P[a][b]) <= 1e-12, "projection must be idempotent");
        }
      require(rank(dim) >= 1, "projection of rank 0 gives a trivial weight");
    }
  }

  /// True when Laplacian and Hessian are a point mass 2*delta (h = |x| on R).
  bool is_delta_tagged(int dim) const { return dim == 1 && kind == WeightKind::AbsX; }
};

/// h and its derivatives at one point.
struct WeightValue {
  double h = 0.0;
  Vec3 grad{};
  double lap = 0.0;
  Mat3 hess{};
};

namespace detail {

inline double hat_delta(double s, double width) {
  return std::max(0.0, 1.0 - std::abs(s) / width) / width;
}

// |y| along a rank-k subspace: the Hessian is (Q - y y^T/|y|^2)/|y| with Q
// the subspace projector. At y = 0 the direction term is replaced by its
// angular average Q/k and |y| by `floor`.
inline void radial_part(const Vec3& y, const Mat3& Q, int k, int dim, double floor,
                        WeightValue& w) {
  double r = 0.0;
  for (int a = 0; a < dim; ++a) r += y[a] * y[a];
  r = std::sqrt(r);
  w.h = r;
  const double reg = std::max(r, floor);
  for (int a = 0; a < dim; ++a) w.grad[a] = r > 0.0 ? y[a] / r : 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      const double dir = r > 0.0 ? y[a] * y[b] / (r * r) : Q[a][b] / k;
      w.hess[a][b] = (Q[a][b] - dir) / reg;
    }
  w.lap = static_cast<double>(k - 1) / reg;
}

}  // namespace detail

/// Pointwise h, grad h, Laplacian and Hessian. `cell` is the grid spacing,
/// used for the regularization at the singular set: |x| -> max(|x|, cell/2)
/// for the radial weights, and a hat of width `cell` for the kink of
/// |theta.x|. For the delta-tagged case (h = |x| on R) lap and hess are the
/// coefficient 2 of the point mass, returned only at x = 0.
inline WeightValue weight_at(const WeightSpec& spec, int dim, const Vec3& x, double cell) {
  WeightValue w;
  switch (spec.kind) {
    case WeightKind::AbsX: {
      Mat3 I{};
      for (int a = 0; a < dim; ++a) I[a][a] = 1.0;
      detail::radial_part(x, I, dim, dim, cell / 2, w);
      if (dim == 1) {
        w.grad[0] = x[0] > 0 ? 1.0 : (x[0] < 0 ? -1.0 : 0.0);
        w.lap = x[0] == 0.0 ? 2.0 : 0.0;
        w.hess[0][0] = w.lap;
      }
      break;
    }
    case WeightKind::Directional: {
      double s = 0.0;
      for (int a = 0; a < dim; ++a) s += spec.theta[a] * x[a];
      w.h = std::abs(s);
      const double sg = s > 0 ? 1.0 : (s < 0 ? -1.0 : 0.0);
      const double d = 2.0 * detail::hat_delta(s, cell);
      for (int a = 0; a < dim; ++a) {
        w.grad[a] = sg * spec.theta[a];
        for (int b = 0; b < dim; ++b) w.hess[a][b] = d * spec.theta[a] * spec.theta[b];
      }
      w.lap = d;
      break;
    }
    case WeightKind::Projection: {
      const auto& P = spec.projection;
      const int k = spec.rank(dim);
      if (k == 1) {
        Vec3 theta{};
        // Column of P through the largest diagonal entry, normalized.
        int c = 0;
        for (int a = 1; a < dim; ++a)
          if (P[a][a] > P[c][c]) c = a;
        const double norm = std::sqrt(P[c][c]);
        for (int a = 0; a < dim; ++a) theta[a] = P[a][c] / norm;
        return weight_at(WeightSpec::directional(theta), dim, x, cell);
      }
      Vec3 y{};
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) y[a] += P[a][b] * x[b];
      detail::radial_part(y, P, k, dim, cell / 2, w);
      break;
    }
  }
  return w;
}

/// Weight and derivatives sampled on the grid. When `delta` is set
/// (h = |x| on R) lap and hess are not fields: convolution against them is
/// f -> delta_coefficient * f.
struct WeightFields {
  RealField h;
  std::vector<RealField> grad;
  RealField lap;
  std::vector<std::vector<RealField>> hess;
  std::optional<double> delta;
};

inline WeightFields weight_fields(const WeightSpec& spec, const GridSpec& g) {
  g.validate();
  spec.validate(g.dim);
  const int n = g.dim;
  WeightFields out;
  out.h = RealField(g);
  out.grad.assign(n, RealField(g));
  out.hess.assign(n, std::vector<RealField>(n, RealField(g)));
  const bool tagged = spec.is_delta_tagged(n);
  if (tagged) out.delta = 2.0;
  out.lap = RealField(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const WeightValue w = weight_at(spec, n, g.position(i), g.dx());
    out.h[i] = w.h;
    for (int a = 0; a < n; ++a) out.grad[a][i] = w.grad[a];
    if (tagged) continue;
    out.lap[i] = w.lap;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out.hess[a][b][i] = w.hess[a][b];
  }
  if (tagged) {
    out.lap = RealField{};
    out.hess.clear();
  }
  return out;
}

}  // namespace morlab
