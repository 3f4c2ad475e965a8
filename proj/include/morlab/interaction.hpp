#pragma once

// Nonlinearities g(rho): a sum of powers, or a Hartree convolution V*rho.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "morlab/grid.hpp"
#include "morlab/kernels.hpp"
#include "morlab/weights.hpp"

namespace morlab {

struct PowerTerm {
  double lambda = 0.0;
  double p = 3.0;
};

enum class HartreeFamily { Gaussian, InversePower };

struct HartreeKernel {
  HartreeFamily family = HartreeFamily::Gaussian;
  double a = 1.0;        // Gaussian exp(-a|x|^2)
  double gamma = 1.0;    // (|x|^2 + eps^2)^(-gamma/2)
  double epsilon = 0.1;
  double coupling = 1.0;

  void validate(int dim) const {
    if (family == HartreeFamily::Gaussian) {
      require(a > 0.0, "Gaussian kernel needs a > 0");
    } else {
      require(gamma > 0.0 && gamma < dim, "inverse-power kernel needs 0 < gamma < n");
      require(epsilon > 0.0, "inverse-power kernel needs epsilon > 0");
    }
  }

  /// Radial profile v(r) without the coupling, and its derivative.
  double profile(double r) const {
    if (family == HartreeFamily::Gaussian) return std::exp(-a * r * r);
    return std::pow(r * r + epsilon * epsilon, -gamma / 2);
  }
  double profile_derivative(double r) const {
    if (family == HartreeFamily::Gaussian) return -2.0 * a * r * std::exp(-a * r * r);
    return -gamma * r * std::pow(r * r + epsilon * epsilon, -gamma / 2 - 1);
  }
};

enum class ModelKind { Free, Power, Hartree };

namespace detail {

// Sampled kernels V and grad V on the padded lattice, one set per grid.
struct HartreeOperators {
  PaddedLattice lattice;
  Kernel v;
  std::vector<Kernel> grad_v;
};

class HartreeCache {
 public:
  std::shared_ptr<const HartreeOperators> get(const HartreeKernel& k, const GridSpec& g) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(g.dim, g.points, g.half_length);
    if (auto it = ops_.find(key); it != ops_.end()) return it->second;
    auto ops = std::make_shared<HartreeOperators>(HartreeOperators{PaddedLattice(g), {}, {}});
    auto radius = [&](const Vec3& x) {
      return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    ops->v = Kernel::sampled(ops->lattice, [&](const Vec3& x) {
      return k.coupling * k.profile(radius(x));
    });
    for (int a = 0; a < g.dim; ++a)
      ops->grad_v.push_back(Kernel::sampled(ops->lattice, [&](const Vec3& x) {
        const double r = radius(x);
        return r > 0.0 ? k.coupling * k.profile_derivative(r) * x[a] / r : 0.0;
      }));
    ops_.emplace(key, ops);
    return ops;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, double>, std::shared_ptr<const HartreeOperators>> ops_;
};

}  // namespace detail

class Model {
 public:
  static Model free() { return Model(); }

  static Model power(std::vector<PowerTerm> terms) {
    require(!terms.empty(), "power-law model needs at least one term");
    std::sort(terms.begin(), terms.end(),
              [](const PowerTerm& x, const PowerTerm& y) { return x.p < y.p; });
    for (std::size_t i = 0; i < terms.size(); ++i) {
      require(terms[i].p > 1.0, "power exponents must exceed 1");
      require(std::isfinite(terms[i].lambda), "power coupling must be finite");
      if (i > 0) require(terms[i].p > terms[i - 1].p, "power exponents must be distinct");
    }
    Model m;
    m.kind_ = ModelKind::Power;
    m.terms_ = std::move(terms);
    return m;
  }

  static Model hartree(const HartreeKernel& kernel) {
    Model m;
    m.kind_ = ModelKind::Hartree;
    m.kernel_ = kernel;
    m.cache_ = std::make_shared<detail::HartreeCache>();
    return m;
  }

  ModelKind kind() const { return kind_; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  const HartreeKernel& kernel() const { return kernel_; }
  bool is_free() const { return kind_ == ModelKind::Free; }

  bool defocusing() const {
    if (kind_ == ModelKind::Power)
      return std::all_of(terms_.begin(), terms_.end(),
                         [](const PowerTerm& t) { return t.lambda >= 0.0; });
    if (kind_ == ModelKind::Hartree) return kernel_.coupling >= 0.0;
    return true;
  }

  std::shared_ptr<const detail::HartreeOperators> hartree_operators(const GridSpec& g) const {
    require(kind_ == ModelKind::Hartree, "model has no Hartree kernel");
    kernel_.validate(g.dim);
    return cache_->get(kernel_, g);
  }

 private:
  ModelKind kind_ = ModelKind::Free;
  std::vector<PowerTerm> terms_;
  HartreeKernel kernel_;
  std::shared_ptr<detail::HartreeCache> cache_;
};

namespace detail {

inline double checked_density(double rho) {
  require(rho >= -1e-14, "density is negative beyond rounding");
  return std::max(rho, 0.0);
}

inline double power_of(double rho, double e) { return rho == 0.0 ? 0.0 : std::pow(rho, e); }

}  // namespace detail

/// V*rho with the coupling, through the sampled kernel.
inline RealField hartree_potential(const Model& model, const RealField& rho) {
  auto ops = model.hartree_operators(rho.grid);
  return ops->v.apply(ops->lattice, rho);
}

inline RealField g_of_rho(const Model& model, const RealField& rho) {
  RealField out(rho.grid);
  switch (model.kind()) {
    case ModelKind::Free:
      for (double r : rho.values) detail::checked_density(r);
      return out;
    case ModelKind::Power:
      for (std::size_t i = 0; i < rho.size(); ++i) {
        const double r = detail::checked_density(rho[i]);
        double s = 0.0;
        for (const auto& t : model.terms()) s += t.lambda * detail::power_of(r, (t.p - 1) / 2);
        out[i] = s;
      }
      return out;
    case ModelKind::Hartree: {
      RealField clipped(rho.grid);
      for (std::size_t i = 0; i < rho.size(); ++i) clipped[i] = detail::checked_density(rho[i]);
      return hartree_potential(model, clipped);
    }
  }
  return out;
}

/// Potential energy density: integral of g from 0 to rho; for Hartree the
/// quadratic form (1/2) rho (V*rho).
inline RealField G_of_rho(const Model& model, const RealField& rho) {
  RealField out(rho.grid);
  if (model.kind() == ModelKind::Hartree) {
    RealField g = g_of_rho(model, rho);
    for (std::size_t i = 0; i < rho.size(); ++i)
      out[i] = 0.5 * detail::checked_density(rho[i]) * g[i];
    return out;
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = detail::checked_density(rho[i]);
    double s = 0.0;
    for (const auto& t : model.terms())
      s += 2.0 * t.lambda / (t.p + 1) * detail::power_of(r, (t.p + 1) / 2);
    out[i] = s;
  }
  return out;
}

inline RealField rho_g_minus_G(const Model& model, const RealField& rho) {
  RealField out(rho.grid);
  if (model.kind() == ModelKind::Hartree) {
    RealField g = g_of_rho(model, rho);
    for (std::size_t i = 0; i < rho.size(); ++i)
      out[i] = 0.5 * detail::checked_density(rho[i]) * g[i];
    return out;
  }
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = detail::checked_density(rho[i]);
    double s = 0.0;
    for (const auto& t : model.terms())
      s += t.lambda * (t.p - 1) / (t.p + 1) * detail::power_of(r, (t.p + 1) / 2);
    out[i] = s;
  }
  return out;
}

struct MonotoneReport {
  double max_profile_derivative = 0.0;  // max over r of c_V v'(r)
  double max_pair_value = 0.0;          // max over pairs of gradV(x).(gradh(x+y) - gradh(y))
  double min_pair_value = 0.0;
  double max_quadrature_gap = 0.0;      // |direct - integral form| over the pairs
  bool nonincreasing = false;
};

/// Samples c_V v'(r) on a log grid of radii and, for h = |x| in dimension
/// `dim`, the pair quantity gradV(x).(gradh(x+y) - gradh(y)) both directly
/// and as the segment integral of |x|^-1 v'(|x|) (x x^T) : Hess h(y + s x).
inline MonotoneReport radial_monotone_check(const HartreeKernel& kernel, int dim = 3,
                                            int pairs = 400, std::uint64_t seed = 1) {
  kernel.validate(dim);
  MonotoneReport rep;
  rep.max_profile_derivative = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double r = std::pow(10.0, -3.0 + 5.0 * i / 200.0);
    rep.max_profile_derivative =
        std::max(rep.max_profile_derivative, kernel.coupling * kernel.profile_derivative(r));
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.5);
  const WeightSpec abs = WeightSpec::abs_x();
  rep.max_pair_value = -std::numeric_limits<double>::infinity();
  rep.min_pair_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < pairs; ++s) {
    Vec3 x{}, y{};
    for (int a = 0; a < dim; ++a) {
      x[a] = normal(gen);
      y[a] = normal(gen);
    }
    double rx = 0.0;
    for (int a = 0; a < dim; ++a) rx += x[a] * x[a];
    rx = std::sqrt(rx);
    if (rx == 0.0) continue;
    const double vp = kernel.coupling * kernel.profile_derivative(rx);
    Vec3 xy{};
    for (int a = 0; a < dim; ++a) xy[a] = x[a] + y[a];
    const WeightValue w1 = weight_at(abs, dim, xy, 0.0);
    const WeightValue w0 = weight_at(abs, dim, y, 0.0);
    double direct = 0.0;
    for (int a = 0; a < dim; ++a) direct += vp * x[a] / rx * (w1.grad[a] - w0.grad[a]);
    double integral = 0.0;
    if (dim >= 2) {
      integral = boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double t) {
            Vec3 z{};
            for (int a = 0; a < dim; ++a) z[a] = y[a] + t * x[a];
            const WeightValue w = weight_at(abs, dim, z, 0.0);
            double q = 0.0;
            for (int a = 0; a < dim; ++a)
              for (int b = 0; b < dim; ++b) q += x[a] * x[b] * w.hess[a][b];
            return vp / rx * q;
          },
          0.0, 1.0);
    } else {
      integral = direct;
    }
    rep.max_pair_value = std::max(rep.max_pair_value, direct);
    rep.min_pair_value = std::min(rep.min_pair_value, direct);
    rep.max_quadrature_gap = std::max(rep.max_quadrature_gap, std::abs(direct - integral));
  }
  rep.nonincreasing = rep.max_profile_derivative <= 0.0 && rep.max_pair_value <= 1e-12;
  return rep;
}

}  // namespace morlab
