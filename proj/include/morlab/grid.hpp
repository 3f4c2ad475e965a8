#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "morlab/errors.hpp"

namespace morlab {

using Complex = std::complex<double>;

/// Periodic rectangular lattice on [-L, L)^n with N points per axis.
/// Sample points are x_j = -L + j*dx, so the origin sits at index N/2.
struct GridSpec {
  int dim = 1;
  int points = 8;
  double half_length = 1.0;

  static constexpr std::size_t kMaxTotalPoints = std::size_t{1} << 24;

  static GridSpec make(int n, int N, double L) {
    GridSpec g{n, N, L};
    g.validate();
    return g;
  }

  void validate() const {
    require(dim >= 1 && dim <= 3, "grid dimension must be 1, 2 or 3");
    require(points >= 8 && (points & (points - 1)) == 0,
            "grid points per axis must be a power of two >= 8 (got " +
                std::to_string(points) + ")");
    require(half_length > 0.0 && std::isfinite(half_length),
            "grid half-length must be positive");
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points);
    require(total <= kMaxTotalPoints, "grid exceeds 2^24 total points");
  }

  double dx() const { return 2.0 * half_length / points; }
  double cell_volume() const { return std::pow(dx(), dim); }

  std::size_t size() const {
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(points);
    return total;
  }

  double coordinate(int j) const { return -half_length + j * dx(); }

  /// Signed FFT frequency index for storage index j.
  int frequency(int j) const { return j < points / 2 ? j : j - points; }
  double wavenumber(int j) const {
    return std::numbers::pi / half_length * frequency(j);
  }

  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % points);
      flat /= points;
    }
    return idx;
  }

  std::array<double, 3> position(std::size_t flat) const {
    auto idx = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = coordinate(idx[a]);
    return x;
  }

  bool operator==(const GridSpec&) const = default;
};

template <class T>
struct Field {
  GridSpec grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), values(g.size(), T{}) {}
  Field(const GridSpec& g, std::vector<T> v) : grid(g), values(std::move(v)) {
    require(values.size() == grid.size(), "field length does not match grid");
  }

  std::size_t size() const { return values.size(); }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }
};

using ComplexField = Field<Complex>;
using RealField = Field<double>;

inline bool all_finite(const ComplexField& f) {
  for (const auto& v : f.values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}
inline bool all_finite(const RealField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

template <class T>
void require_same_grid(const Field<T>& a, const Field<T>& b) {
  require(a.grid == b.grid, "fields live on different grids");
}

template <class F>
ComplexField sample(const GridSpec& g, F&& fn) {
  ComplexField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(g.position(i));
  return out;
}

template <class F>
RealField sample_real(const GridSpec& g, F&& fn) {
  RealField out(g);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(g.position(i));
  return out;
}

inline RealField real_part(const ComplexField& f) {
  RealField out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
  return out;
}

inline ComplexField to_complex(const RealField& f) {
  ComplexField out(f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
  return out;
}

inline RealField density(const ComplexField& u) {
  RealField rho(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) rho[i] = std::norm(u[i]);
  return rho;
}

inline double sup_norm(const ComplexField& u) {
  double m = 0.0;
  for (const auto& v : u.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace morlab
