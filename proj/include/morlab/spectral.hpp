#pragma once

// Spectral calculus on the periodic grid. The discrete transform used by
// spectral_transform is the unitary DFT,
//
//   F[f]_k = N^{-n/2} sum_j f_j exp(-i k.x_j),
//
// so that sum |F[f]|^2 = sum |f|^2 (Parseval without a grid-dependent factor).
// Quadratures are the rectangle rule dx^n * sum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <vector>

#include "morlab/fft.hpp"
#include "morlab/grid.hpp"

namespace morlab {

enum class TransformDirection { Forward, Inverse };

inline ComplexField spectral_transform(const ComplexField& f, TransformDirection direction) {
  require(all_finite(f), "spectral_transform: non-finite input");
  ComplexField out = f;
  const double scale = 1.0 / std::sqrt(static_cast<double>(f.size()));
  fft::transform(out.values, fft::grid_dims(f.grid),
                 direction == TransformDirection::Forward ? fft::Direction::Forward
                                                          : fft::Direction::Backward);
  for (auto& v : out.values) v *= scale;
  return out;
}

namespace detail {

template <class T>
ComplexField as_complex(const Field<T>& f) {
  if constexpr (std::is_same_v<T, Complex>) {
    return f;
  } else {
    return to_complex(f);
  }
}

template <class T>
Field<T> from_complex(ComplexField f) {
  if constexpr (std::is_same_v<T, Complex>) {
    return f;
  } else {
    return real_part(f);
  }
}

}  // namespace detail

/// Multiplies the spectrum of f by symbol(k), k the wave vector (zero-padded
/// to three components). Real input yields the real part of the result.
template <class T, class Symbol>
Field<T> apply_symbol(const Field<T>& f, Symbol&& symbol) {
  ComplexField work = detail::as_complex(f);
  fft::forward(work.values, f.grid);
  const GridSpec& g = f.grid;
  std::array<double, 3> k{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto idx = g.unflatten(i);
    for (int a = 0; a < g.dim; ++a) k[a] = g.wavenumber(idx[a]);
    work[i] *= symbol(k, idx);
  }
  fft::inverse(work.values, g);
  return detail::from_complex<T>(std::move(work));
}

/// |k|^s multiplier. For s < 0 the k = 0 mode is removed, which is the
/// discrete convention for every homogeneous norm in this library.
template <class T>
Field<T> fractional_omega(const Field<T>& f, double s) {
  if (s == 0.0) return f;
  return apply_symbol(f, [s](const std::array<double, 3>& k, const std::array<int, 3>&) {
    const double kk = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    if (kk == 0.0) return Complex(0.0);
    return Complex(std::pow(kk, s));
  });
}

/// d/dx_axis with symbol i k_axis. The Nyquist mode is dropped so that the
/// derivative of a real field stays real.
template <class T>
Field<T> partial(const Field<T>& f, int axis) {
  const int nyquist = -f.grid.points / 2;
  const GridSpec g = f.grid;
  return apply_symbol(f, [axis, nyquist, &g](const std::array<double, 3>& k,
                                             const std::array<int, 3>& idx) {
    if (g.frequency(idx[axis]) == nyquist) return Complex(0.0);
    return Complex(0.0, k[axis]);
  });
}

template <class T>
std::vector<Field<T>> gradient(const Field<T>& f) {
  std::vector<Field<T>> out;
  out.reserve(f.grid.dim);
  for (int a = 0; a < f.grid.dim; ++a) out.push_back(partial(f, a));
  return out;
}

template <class T>
Field<T> divergence(const std::vector<Field<T>>& v) {
  require(!v.empty(), "divergence of empty vector field");
  Field<T> out(v.front().grid);
  for (std::size_t a = 0; a < v.size(); ++a) {
    auto d = partial(v[a], static_cast<int>(a));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i];
  }
  return out;
}

/// Spectral Laplacian, symbol -|k|^2 (Nyquist kept, consistent with the
/// free propagator).
template <class T>
Field<T> laplacian(const Field<T>& f) {
  return apply_symbol(f, [](const std::array<double, 3>& k, const std::array<int, 3>&) {
    return Complex(-(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
  });
}

// ---------------------------------------------------------------------------
// Quadratures and norms

template <class T>
double integral(const Field<T>& f)
  requires std::is_same_v<T, double>
{
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * f.grid.cell_volume();
}

/// <a, b> = dx^n sum conj(a) b.
inline Complex inner(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a, b);
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid.cell_volume();
}

inline double inner(const RealField& a, const RealField& b) {
  require_same_grid(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.grid.cell_volume();
}

constexpr double kInfinity = std::numeric_limits<double>::infinity();

template <class T>
double lp_norm(const Field<T>& f, double r) {
  require(r >= 1.0, "lp_norm: exponent must be >= 1");
  if (std::isinf(r)) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  if (r == 2.0) {
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s * f.grid.cell_volume());
  }
  for (const auto& v : f.values) s += std::pow(std::abs(v), r);
  return std::pow(s * f.grid.cell_volume(), 1.0 / r);
}

/// Homogeneous Sobolev norm ||omega^sigma f||_r.
template <class T>
double sobolev_norm(const Field<T>& f, double sigma, double r) {
  require(r >= 1.0, "sobolev_norm: exponent must be >= 1");
  if (sigma == 0.0) return lp_norm(f, r);
  return lp_norm(fractional_omega(f, sigma), r);
}

/// Inhomogeneous H^1 norm (||f||_2^2 + ||grad f||_2^2)^{1/2}, evaluated
/// spectrally.
inline double h1_norm(const ComplexField& f) {
  ComplexField work = f;
  fft::forward(work.values, f.grid);
  const GridSpec& g = f.grid;
  double s = 0.0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto idx = g.unflatten(i);
    double kk = 0.0;
    for (int a = 0; a < g.dim; ++a) kk += g.wavenumber(idx[a]) * g.wavenumber(idx[a]);
    s += (1.0 + kk) * std::norm(work[i]);
  }
  return std::sqrt(s * g.cell_volume() / static_cast<double>(work.size()));
}

inline double gradient_norm(const ComplexField& f) {
  double s = 0.0;
  for (const auto& d : gradient(f))
    for (const auto& v : d.values) s += std::norm(v);
  return std::sqrt(s * f.grid.cell_volume());
}

// ---------------------------------------------------------------------------
// Zero-padded linear convolution

/// Linear (non-circular) convolution on R^n of two fields sampled on the same
/// grid: (a*b)(x_j) = dx^n sum_i a(x_i) b(x_j - x_i), where x_j - x_i is read
/// off b's own lattice. Pairs whose difference leaves the box contribute zero.
template <class T>
Field<T> linear_convolve(const Field<T>& a, const Field<T>& b) {
  require_same_grid(a, b);
  const GridSpec& g = a.grid;
  const int N = g.points;
  const int P = 2 * N;
  std::vector<int> dims(g.dim, P);
  std::size_t padded = 1;
  for (int d = 0; d < g.dim; ++d) padded *= static_cast<std::size_t>(P);

  std::vector<Complex> pa(padded), pb(padded);
  auto padded_index = [&](const std::array<int, 3>& idx) {
    std::size_t flat = 0;
    for (int d = 0; d < g.dim; ++d) flat = flat * P + static_cast<std::size_t>(idx[d]);
    return flat;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto idx = g.unflatten(i);
    const std::size_t p = padded_index(idx);
    pa[p] = a[i];
    pb[p] = b[i];
  }
  fft::transform(pa, dims, fft::Direction::Forward);
  fft::transform(pb, dims, fft::Direction::Forward);
  for (std::size_t i = 0; i < padded; ++i) pa[i] *= pb[i];
  fft::transform(pa, dims, fft::Direction::Backward);

  // Output sample j collects the linear-convolution index j + N/2 per axis.
  Field<T> out(g);
  const double scale = g.cell_volume() / static_cast<double>(padded);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto idx = g.unflatten(i);
    for (int d = 0; d < g.dim; ++d) idx[d] += N / 2;
    const Complex v = pa[padded_index(idx)] * scale;
    if constexpr (std::is_same_v<T, Complex>) {
      out[i] = v;
    } else {
      out[i] = v.real();
    }
  }
  return out;
}

}  // namespace morlab
