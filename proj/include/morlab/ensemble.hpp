#pragma once

// Initial data: Gaussians (with the closed-form free evolution), the cubic
// soliton in one dimension, and seeded random band-limited fields.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "morlab/grid.hpp"
#include "morlab/spectral.hpp"
#include "morlab/weights.hpp"

namespace morlab {

struct GaussianData {
  double amplitude = 1.0;
  double width = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 velocity{0.0, 0.0, 0.0};
};

/// Free evolution of A exp(-|x-c|^2 / (2 w^2)) exp(i v.x) under U(t), in closed
/// form (Galilean boost of the spreading Gaussian).
inline ComplexField free_gaussian(const GridSpec& g, const GaussianData& d, double t = 0.0) {
  require(d.width > 0.0, "gaussian width must be positive");
  const int n = g.dim;
  const Complex s(d.width * d.width, t);
  const Complex pre = d.amplitude * std::pow(Complex(d.width * d.width, 0.0) / s, 0.5 * n);
  return sample(g, [&](const Vec3& x) {
    double r2 = 0.0, vx = 0.0, v2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double y = x[a] - d.center[a] - d.velocity[a] * t;
      r2 += y * y;
      vx += d.velocity[a] * x[a];
      v2 += d.velocity[a] * d.velocity[a];
    }
    return pre * std::exp(-r2 / (2.0 * s)) * std::polar(1.0, vx - 0.5 * v2 * t);
  });
}

/// a sech(a (x - c)) exp(i a^2 t / 2): the standing wave of g = -|u|^2, n = 1.
inline ComplexField cubic_soliton(const GridSpec& g, double a = 1.0, double c = 0.0, double t = 0.0) {
  require(g.dim == 1, "soliton data is one-dimensional");
  require(a > 0.0, "soliton amplitude must be positive");
  return sample(g, [&](const Vec3& x) {
    return a / std::cosh(a * (x[0] - c)) * std::polar(1.0, 0.5 * a * a * t);
  });
}

/// splitmix64 state advance; one output per call.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in (0, 1) from the top 53 bits.
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  /// Standard complex normal via Box-Muller (variance 1/2 per component).
  Complex complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  std::uint64_t state_;
};

struct EnsembleSpec {
  int modes = 4;          // Fourier modes per axis: 0, 1, -1, 2, -2, ...
  double h1_norm = 1.0;   // target inhomogeneous H^1 norm
  double envelope = 0.0;  // Gaussian envelope width; 0 means L/6
};

/// Sum of plane waves exp(i m.x / w), m in the lowest `modes` integers per
/// axis, with complex-normal coefficients, under a Gaussian envelope of
/// width w and rescaled to the target norm.
inline ComplexField random_field(SplitMix64& rng, const GridSpec& g, const EnsembleSpec& spec) {
  g.validate();
  require(spec.modes >= 1 && spec.modes <= g.points, "modes must be in [1, N]");
  require(spec.h1_norm > 0.0, "target H^1 norm must be positive");
  const int n = g.dim;
  std::vector<int> freqs;
  for (int m = 0; static_cast<int>(freqs.size()) < spec.modes; ++m) {
    if (m == 0) { freqs.push_back(0); continue; }
    freqs.push_back(m);
    if (static_cast<int>(freqs.size()) < spec.modes) freqs.push_back(-m);
  }
  const double w = spec.envelope > 0.0 ? spec.envelope : g.half_length / 6.0;
  std::size_t combos = 1;
  for (int a = 0; a < n; ++a) combos *= static_cast<std::size_t>(spec.modes);
  std::vector<Complex> coef(combos);
  std::vector<std::array<double, 3>> wave(combos, {0.0, 0.0, 0.0});
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t rest = c;
    for (int a = 0; a < n; ++a) {
      wave[c][a] = freqs[rest % spec.modes] / w;
      rest /= spec.modes;
    }
    coef[c] = rng.complex_normal();
  }
  ComplexField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = g.position(i);
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
    Complex s = 0.0;
    for (std::size_t c = 0; c < combos; ++c) {
      double phase = 0.0;
      for (int a = 0; a < n; ++a) phase += wave[c][a] * x[a];
      s += coef[c] * std::polar(1.0, phase);
    }
    u[i] = s * std::exp(-r2 / (2.0 * w * w));
  }
  const double norm = h1_norm(u);
  require(norm > 0.0, "random field vanished");
  for (auto& v : u.values) v *= spec.h1_norm / norm;
  return u;
}

inline std::vector<ComplexField> random_ensemble(std::uint64_t seed, int count, const GridSpec& g,
                                                 const EnsembleSpec& spec = {}) {
  require(count >= 0, "ensemble count must be non-negative");
  SplitMix64 rng(seed);
  std::vector<ComplexField> out;
  for (int i = 0; i < count; ++i) out.push_back(random_field(rng, g, spec));
  return out;
}

}  // namespace morlab
