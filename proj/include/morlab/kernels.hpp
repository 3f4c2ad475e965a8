#pragma once

// Convolution against fixed kernels on R^n, computed on a lattice padded to
// twice the box length per axis so that no pair of grid points wraps around.
//
// A kernel is either
//   * sampled: K(x_i - x_j) read off the lattice of differences, giving the
//     exact discrete sum dx^n sum_j K(x_i - x_j) f_j;
//   * spectral: a continuous Fourier transform K^(k) evaluated on the padded
//     lattice's wavenumbers, which is the convolution of the band-limited
//     interpolant of f against K;
//   * a point mass c*delta, for which convolution is f -> c f.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <type_traits>
#include <vector>

#include "morlab/fft.hpp"
#include "morlab/grid.hpp"
#include "morlab/weights.hpp"

namespace morlab {

class PaddedLattice {
 public:
  explicit PaddedLattice(const GridSpec& g) : grid_(g), padded_(2 * g.points) {
    total_ = 1;
    for (int d = 0; d < g.dim; ++d) total_ *= static_cast<std::size_t>(padded_);
    dims_.assign(g.dim, padded_);
  }

  const GridSpec& grid() const { return grid_; }
  int points() const { return padded_; }
  std::size_t size() const { return total_; }
  const std::vector<int>& dims() const { return dims_; }

  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = grid_.dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % padded_);
      flat /= padded_;
    }
    return idx;
  }
  std::size_t flatten(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < grid_.dim; ++a) flat = flat * padded_ + static_cast<std::size_t>(idx[a]);
    return flat;
  }
  int frequency(int j) const { return j < padded_ / 2 ? j : j - padded_; }
  double wavenumber(int j) const {
    return 2.0 * std::numbers::pi * frequency(j) / (padded_ * grid_.dx());
  }

  /// DFT of f placed in the low corner of the padded array.
  template <class T>
  std::vector<Complex> spectrum(const Field<T>& f) const {
    require(f.grid == grid_, "field grid does not match the convolution lattice");
    std::vector<Complex> out(total_);
    for (std::size_t i = 0; i < f.size(); ++i) out[flatten(grid_.unflatten(i))] = f[i];
    fft::transform(out, dims_, fft::Direction::Forward);
    return out;
  }

  /// Inverse of `spectrum` followed by cropping back to the grid.
  template <class T>
  Field<T> restore(std::vector<Complex> spec) const {
    fft::transform(spec, dims_, fft::Direction::Backward);
    const double scale = 1.0 / static_cast<double>(total_);
    Field<T> out(grid_);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const Complex v = spec[flatten(grid_.unflatten(i))] * scale;
      if constexpr (std::is_same_v<T, Complex>) {
        out[i] = v;
      } else {
        out[i] = v.real();
      }
    }
    return out;
  }

 private:
  GridSpec grid_;
  int padded_;
  std::size_t total_;
  std::vector<int> dims_;
};

class Kernel {
 public:
  Kernel() = default;

  static Kernel point_mass(double c) {
    Kernel k;
    k.delta_ = c;
    k.is_delta_ = true;
    return k;
  }

  /// K sampled at lattice differences m*dx, m in [-N, N) per axis.
  template <class Fn>
  static Kernel sampled(const PaddedLattice& lat, Fn&& fn) {
    const GridSpec& g = lat.grid();
    Kernel k;
    k.multiplier_.resize(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) {
      auto idx = lat.unflatten(i);
      Vec3 x{0.0, 0.0, 0.0};
      for (int a = 0; a < g.dim; ++a) x[a] = lat.frequency(idx[a]) * g.dx();
      k.multiplier_[i] = fn(x);
    }
    fft::transform(k.multiplier_, lat.dims(), fft::Direction::Forward);
    const double w = g.cell_volume();
    for (auto& v : k.multiplier_) v *= w;
    return k;
  }

  /// K given by its Fourier symbol on the padded lattice.
  template <class Fn>
  static Kernel spectral(const PaddedLattice& lat, Fn&& symbol) {
    const GridSpec& g = lat.grid();
    Kernel k;
    k.multiplier_.resize(lat.size());
    Vec3 kv{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < lat.size(); ++i) {
      auto idx = lat.unflatten(i);
      long m2 = 0;
      for (int a = 0; a < g.dim; ++a) {
        kv[a] = lat.wavenumber(idx[a]);
        const long f = lat.frequency(idx[a]);
        m2 += f * f;
      }
      k.multiplier_[i] = symbol(kv, m2);
    }
    return k;
  }

  bool is_delta() const { return is_delta_; }
  double delta_coefficient() const { return delta_; }

  template <class T>
  Field<T> apply(const PaddedLattice& lat, const Field<T>& f) const {
    if (is_delta_) {
      Field<T> out = f;
      for (auto& v : out.values) v *= delta_;
      return out;
    }
    return apply_spectrum<T>(lat, lat.spectrum(f), f);
  }

  /// Convolution given the padded spectrum of f (f itself is needed only
  /// for the point-mass case).
  template <class T>
  Field<T> apply_spectrum(const PaddedLattice& lat, std::vector<Complex> spec,
                          const Field<T>& f) const {
    if (is_delta_) {
      Field<T> out = f;
      for (auto& v : out.values) v *= delta_;
      return out;
    }
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier_[i];
    return lat.template restore<T>(std::move(spec));
  }

  const std::vector<Complex>& multiplier() const { return multiplier_; }

 private:
  std::vector<Complex> multiplier_;
  double delta_ = 0.0;
  bool is_delta_ = false;
};

// ---------------------------------------------------------------------------
// Fourier transform of the truncated weight |x| 1{|x| <= R}

namespace detail {

/// Integral of J0 over [0, z]: unit-step cumulative table plus a Gauss
/// rule on the fractional remainder.
class BesselJ0Integral {
 public:
  double operator()(double z) {
    const int m = static_cast<int>(std::floor(z));
    extend(m);
    return table_[m] + panel(m, z);
  }

 private:
  static double panel(double a, double b) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate(
        [](double t) { return std::cyl_bessel_j(0.0, t); }, a, b);
  }
  void extend(int m) {
    if (table_.empty()) table_.push_back(0.0);
    while (static_cast<int>(table_.size()) <= m) {
      const int j = static_cast<int>(table_.size());
      table_.push_back(table_.back() + panel(j - 1, j));
    }
  }
  std::vector<double> table_;
};

}  // namespace detail

/// Continuous Fourier transform of |x| restricted to the ball of radius R,
/// as a function of |k|.
inline double truncated_abs_transform(int dim, double kappa, double R,
                                      detail::BesselJ0Integral& j0int) {
  const double z = kappa * R;
  const double pi = std::numbers::pi;
  switch (dim) {
    case 1: {
      if (z < 2.0) {
        double s = 0.0, term = 1.0;  // term = (-1)^j z^{2j}/(2j)!
        for (int j = 0; j < 40; ++j) {
          s += term / (2 * j + 2);
          term *= -z * z / ((2 * j + 1) * (2 * j + 2));
        }
        return 2.0 * R * R * s;
      }
      return 2.0 / (kappa * kappa) * (z * std::sin(z) + std::cos(z) - 1.0);
    }
    case 2: {
      if (z < 4.0) {
        double s = 0.0, term = 1.0;  // term = (-1)^j (z/2)^{2j}/(j!)^2
        for (int j = 0; j < 60; ++j) {
          s += term / (2 * j + 3);
          term *= -(z * z / 4.0) / ((j + 1.0) * (j + 1.0));
        }
        return 2.0 * pi * R * R * R * s;
      }
      const double bracket =
          z * z * std::cyl_bessel_j(1.0, z) + z * std::cyl_bessel_j(0.0, z) - j0int(z);
      return 2.0 * pi / (kappa * kappa * kappa) * bracket;
    }
    default: {
      if (z < 2.0) {
        double s = 0.0, term = 1.0;  // term = (-1)^j z^{2j}/(2j+1)!
        for (int j = 0; j < 40; ++j) {
          s += term / (2 * j + 4);
          term *= -z * z / ((2 * j + 2) * (2 * j + 3));
        }
        return 4.0 * pi * std::pow(R, 4) * s;
      }
      const double k4 = kappa * kappa * kappa * kappa;
      return 4.0 * pi / k4 *
             (-z * z * std::cos(z) + 2.0 * z * std::sin(z) + 2.0 * std::cos(z) - 2.0);
    }
  }
}

// ---------------------------------------------------------------------------
// Convolution operators for a weight h and its derivatives

enum class KernelMode { Sampled, Spectral };

/// h*, (d_a h)*, (Laplacian h)*, (d_a d_b h)* on one grid.
class WeightOperator {
 public:
  WeightOperator(const WeightSpec& spec, const GridSpec& g, KernelMode mode = KernelMode::Spectral)
      : spec_(spec), lattice_(g) {
    g.validate();
    spec.validate(g.dim);
    mode_ = spec.kind == WeightKind::AbsX ? mode : KernelMode::Sampled;
    const int n = g.dim;
    grad_.resize(n);
    hess_.assign(n, std::vector<Kernel>(n));
    if (mode_ == KernelMode::Sampled) {
      build_sampled();
    } else {
      build_spectral();
    }
    if (spec.is_delta_tagged(n)) {
      lap_ = Kernel::point_mass(2.0);
      hess_[0][0] = Kernel::point_mass(2.0);
    }
  }

  const WeightSpec& spec() const { return spec_; }
  const GridSpec& grid() const { return lattice_.grid(); }
  const PaddedLattice& lattice() const { return lattice_; }
  KernelMode mode() const { return mode_; }
  int dim() const { return lattice_.grid().dim; }

  const Kernel& h() const { return h_; }
  const Kernel& grad(int a) const { return grad_[a]; }
  const Kernel& lap() const { return lap_; }
  const Kernel& hess(int a, int b) const { return hess_[a][b]; }

  template <class T>
  Field<T> conv_h(const Field<T>& f) const { return h_.apply(lattice_, f); }
  template <class T>
  Field<T> conv_grad(int a, const Field<T>& f) const { return grad_[a].apply(lattice_, f); }
  template <class T>
  Field<T> conv_lap(const Field<T>& f) const { return lap_.apply(lattice_, f); }
  template <class T>
  Field<T> conv_hess(int a, int b, const Field<T>& f) const {
    return hess_[a][b].apply(lattice_, f);
  }

 private:
  void build_sampled() {
    const GridSpec& g = lattice_.grid();
    const int n = g.dim;
    const double cell = g.dx();
    auto at = [&](const Vec3& x) { return weight_at(spec_, n, x, cell); };
    h_ = Kernel::sampled(lattice_, [&](const Vec3& x) { return at(x).h; });
    for (int a = 0; a < n; ++a)
      grad_[a] = Kernel::sampled(lattice_, [&](const Vec3& x) { return at(x).grad[a]; });
    if (spec_.is_delta_tagged(n)) return;
    lap_ = Kernel::sampled(lattice_, [&](const Vec3& x) { return at(x).lap; });
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        hess_[a][b] = Kernel::sampled(lattice_, [&](const Vec3& x) { return at(x).hess[a][b]; });
        if (b != a) hess_[b][a] = hess_[a][b];
      }
  }

  // |x| truncated at R = 2L: exact on every pair of points at distance < 2L,
  // with a period of 4L on the padded lattice so that no wrap occurs.
  void build_spectral() {
    const GridSpec& g = lattice_.grid();
    const int n = g.dim;
    const double R = 2.0 * g.half_length;
    detail::BesselJ0Integral j0int;
    std::map<long, double> cache;
    const double unit = 2.0 * std::numbers::pi / (lattice_.points() * g.dx());
    auto hhat = [&](long m2) {
      auto it = cache.find(m2);
      if (it != cache.end()) return it->second;
      const double v = truncated_abs_transform(n, unit * std::sqrt(static_cast<double>(m2)), R, j0int);
      cache.emplace(m2, v);
      return v;
    };
    h_ = Kernel::spectral(lattice_, [&](const Vec3&, long m2) { return Complex(hhat(m2)); });
    for (int a = 0; a < n; ++a)
      grad_[a] = Kernel::spectral(lattice_, [&](const Vec3& k, long m2) {
        return Complex(0.0, k[a] * hhat(m2));
      });
    if (spec_.is_delta_tagged(n)) return;
    lap_ = Kernel::spectral(lattice_, [&](const Vec3& k, long m2) {
      return Complex(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * hhat(m2));
    });
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        hess_[a][b] = Kernel::spectral(lattice_, [&](const Vec3& k, long m2) {
          return Complex(-k[a] * k[b] * hhat(m2));
        });
        if (b != a) hess_[b][a] = hess_[a][b];
      }
  }

  WeightSpec spec_;
  PaddedLattice lattice_;
  KernelMode mode_ = KernelMode::Spectral;
  Kernel h_;
  std::vector<Kernel> grad_;
  Kernel lap_;
  std::vector<std::vector<Kernel>> hess_;
};

}  // namespace morlab
