#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "morlab/morlab.hpp"

using namespace morlab;

namespace {

// Two boosted Gaussians, so that the current is not a multiple of rho.
ComplexField two_bumps(const GridSpec& g) {
  GaussianData a, b;
  a.center = {-0.8, 0.3, 0.2};
  a.velocity = {0.9, -0.4, 0.3};
  b.amplitude = 0.7;
  b.width = 0.8;
  b.center = {0.9, -0.5, -0.1};
  b.velocity = {-0.6, 0.8, -0.2};
  ComplexField u = free_gaussian(g, a);
  const ComplexField v = free_gaussian(g, b);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += v[i];
  return u;
}

std::vector<ComplexField> ensemble(int n, int N, double L, std::uint64_t seed, int count) {
  EnsembleSpec spec;
  spec.h1_norm = 1.5;
  return random_ensemble(seed, count, GridSpec::make(n, N, L), spec);
}

Vec3 offset(const GridSpec& g, std::size_t i, std::size_t j) {
  const Vec3 xi = g.position(i), xj = g.position(j);
  return {xi[0] - xj[0], xi[1] - xj[1], xi[2] - xj[2]};
}

}  // namespace

TEST(Remainder, MatchesDirectDoubleSum) {
  const GridSpec g = GridSpec::make(2, 32, 4.0);
  const ComplexField u = two_bumps(g);
  const auto du = gradient(u);
  const RealField rho = density(u);
  const double dv = g.cell_volume();
  for (const WeightSpec& w : {WeightSpec::abs_x(), WeightSpec::directional({0.6, 0.8, 0.0})}) {
    const WeightOperator op(w, g, KernelMode::Sampled);
    // sum_ab sum_xy H_ab(x-y) [rho(y) conj(d_a u(x)) d_b u(x) - conj(w_a(x)) w_b(y)]
    Complex direct = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const Mat3 H = weight_at(w, 2, offset(g, i, j), g.dx()).hess;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const Complex wa = std::conj(u[i]) * du[a][i], wb = std::conj(u[j]) * du[b][j];
            direct += H[a][b] * (rho[j] * std::conj(du[a][i]) * du[b][i] - std::conj(wa) * wb);
          }
      }
    direct *= dv * dv;
    const Remainder r = remainder_R(u, op);
    EXPECT_NEAR(r.value, direct.real(), 1e-6 * std::abs(direct.real()));
    EXPECT_NEAR(r.imag_residue, direct.imag(), 1e-6 * std::abs(direct.real()));
    EXPECT_GT(r.value, 0.0);
  }
}

TEST(HartreeTerm, MatchesDirectTripleSum) {
  const GridSpec g = GridSpec::make(2, 32, 4.0);
  HartreeKernel hk;
  hk.a = 0.7;
  hk.coupling = 1.3;
  const Model m = Model::hartree(hk);
  const RealField rho = density(two_bumps(g));
  const double dv = g.cell_volume();
  // sum_a sum_x rho(x) sum_y d_a h(x-y) rho(y) sum_z d_a V(y-z) rho(z)
  std::vector<std::vector<double>> force(2, std::vector<double>(g.size(), 0.0));
  for (std::size_t y = 0; y < g.size(); ++y)
    for (std::size_t z = 0; z < g.size(); ++z) {
      const Vec3 d = offset(g, y, z);
      const double r = std::hypot(d[0], d[1]);
      if (r == 0.0) continue;
      const double vp = hk.coupling * hk.profile_derivative(r) / r;
      for (int a = 0; a < 2; ++a) force[a][y] += vp * d[a] * rho[z] * dv;
    }
  double direct = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y) {
      const Vec3 gh = weight_at(WeightSpec::abs_x(), 2, offset(g, x, y), g.dx()).grad;
      for (int a = 0; a < 2; ++a) direct += rho[x] * gh[a] * rho[y] * force[a][y];
    }
  direct *= dv * dv;
  const WeightOperator op(WeightSpec::abs_x(), g, KernelMode::Sampled);
  const double p = hartree_potential_term(rho, m, op);
  EXPECT_NEAR(p, direct, 1e-6 * std::abs(direct));
  EXPECT_GT(p, 0.0);
}

TEST(Bilinear, DiagonalReducesToQuadratic) {
  for (int n : {2, 3}) {
    const GridSpec g = GridSpec::make(n, n == 2 ? 32 : 16, 4.0);
    const ComplexField u = two_bumps(g);
    const Model m = Model::power({{1.0, 3.0}});
    const WeightOperator op(WeightSpec::abs_x(), g);
    const BilinearRate b = bilinear_rate(u, u, m, op);
    const RateTerms q = nls_rate(u, m, op);
    const RealField rho = density(u);
    const double s = q.scale();
    EXPECT_NEAR(b.J, quad_J(rho, op), 1e-12 * std::abs(b.J));
    EXPECT_NEAR(b.M, quad_M(rho, current(u), op), 1e-12 * s);
    EXPECT_NEAR(b.K, q.K, 1e-12 * s);
    EXPECT_NEAR(b.P, q.P, 1e-12 * s);
    EXPECT_NEAR(b.R, q.R.value, 1e-12 * s);
  }
}

TEST(Bilinear, NonnegativeZeroAndPhaseInvariant) {
  const auto fields = ensemble(2, 32, 6.0, 17, 6);
  const Model m = Model::power({{1.0, 3.0}});
  const WeightOperator op(WeightSpec::abs_x(), fields[0].grid);
  for (std::size_t k = 0; k + 1 < fields.size(); ++k) {
    const BilinearRate b = bilinear_rate(fields[k], fields[k + 1], m, op);
    const double s = std::abs(b.K) + std::abs(b.P) + std::abs(b.R);
    EXPECT_GE(b.R, -1e-8 * s);
    EXPECT_GE(b.K, -1e-8 * s);
    ComplexField a = fields[k], c = fields[k + 1];
    for (auto& z : a.values) z *= std::polar(1.0, 0.7);
    for (auto& z : c.values) z *= std::polar(1.0, -2.1);
    const BilinearRate bp = bilinear_rate(a, c, m, op);
    EXPECT_NEAR(bp.R, b.R, 1e-10 * s);
    EXPECT_NEAR(bp.M, b.M, 1e-10 * s);
  }
  const ComplexField zero(fields[0].grid);
  const BilinearRate z = bilinear_rate(fields[0], zero, m, op);
  EXPECT_EQ(z.J, 0.0);
  EXPECT_EQ(z.K, 0.0);
  EXPECT_EQ(z.R, 0.0);
}

TEST(Positivity, RateTermsOnRandomFields) {
  HartreeKernel hk;
  hk.a = 0.5;
  for (int n : {2, 3}) {
    const auto fields = ensemble(n, n == 2 ? 32 : 16, 6.0, 100 + n, 4);
    const WeightOperator op(WeightSpec::abs_x(), fields[0].grid);
    for (const auto& u : fields) {
      const RateTerms t = nls_rate(u, Model::power({{1.0, 3.0}, {0.3, 5.0}}), op);
      const double s = t.scale();
      EXPECT_GE(t.K, -1e-8 * s);
      EXPECT_GE(t.P, -1e-8 * s);
      EXPECT_GE(t.R.value, -1e-8 * s);
      EXPECT_LE(std::abs(t.R.imag_residue), 1e-10 * s);
      const RateTerms h = hartree_rate(u, Model::hartree(hk), op);
      EXPECT_GE(h.P, -1e-8 * h.scale());
    }
  }
}

TEST(OneDim, RemainderVanishes) {
  for (const auto& u : ensemble(1, 256, 10.0, 5, 5)) {
    const WeightOperator op(WeightSpec::abs_x(), u.grid);
    const RateTerms t = nls_rate(u, Model::power({{1.0, 3.0}}), op);
    EXPECT_LE(std::abs(t.R.value), 1e-10 * t.scale());
  }
}

TEST(OneDim, CubicSolitonRateVanishes) {
  const GridSpec g = GridSpec::make(1, 512, 20.0);
  const ComplexField u = cubic_soliton(g, 1.0, 0.0);
  const WeightOperator op(WeightSpec::abs_x(), g);
  const RateTerms t = nls_rate(u, Model::power({{-1.0, 3.0}}), op);
  // ||rho'||^2 = int rho^3 = 16/15 for rho = sech^2
  EXPECT_NEAR(t.K, 16.0 / 15.0, 1e-10);
  EXPECT_NEAR(t.P, -16.0 / 15.0, 1e-10);
  EXPECT_NEAR(t.rate(), 0.0, 1e-10);
}

TEST(OneDim, FocusingMarginEqualsRate) {
  const GridSpec g = GridSpec::make(1, 512, 12.0);
  for (double p : {5.0, 7.0})
    for (double A : {0.5, 1.5}) {
      GaussianData d;
      d.amplitude = A;
      const ComplexField u = free_gaussian(g, d);
      const FocusingMargin fm = focusing_margin(u, p);
      // rho = A^2 exp(-x^2)
      EXPECT_NEAR(fm.grad_term, std::pow(A, 4) * std::sqrt(std::numbers::pi / 2), 1e-10);
      EXPECT_NEAR(fm.potential_term,
                  2 * (p - 1) / (p + 1) * std::pow(A, p + 3) * std::sqrt(2 * std::numbers::pi / (p + 3)),
                  1e-10 * fm.potential_term);
      const WeightOperator op(WeightSpec::abs_x(), g);
      const RateTerms t = nls_rate(u, Model::power({{-1.0, p}}), op);
      EXPECT_NEAR(fm.margin, t.rate(), 1e-10 * t.scale());
      if (A < 1.0) EXPECT_GT(fm.margin, 0.0);
      if (A > 1.0) EXPECT_LT(fm.margin, 0.0);
    }
  EXPECT_THROW(focusing_margin(cubic_soliton(g, 1.0, 0.0), 3.0), InvalidArgument);
}

TEST(OneDim, PointwiseLemmaChain) {
  for (const auto& u : ensemble(1, 512, 12.0, 9, 8)) {
    const PointwiseLemma l = pointwise_lemma(u);
    EXPECT_LE(l.sup_rho32, l.bound * (1 + 1e-12));
    EXPECT_LE(l.bound, l.cs_bound * (1 + 1e-3));
  }
}

TEST(OneDim, PointwiseBoundOnTrajectory) {
  const GridSpec g = GridSpec::make(1, 256, 16.0);
  GaussianData d;
  d.velocity = {0.4, 0.0, 0.0};
  const TrajectoryRecord tr = propagate(free_gaussian(g, d), {0.0, 2.0, 1e-3, 20, 1e6},
                                        Model::power({{1.0, 3.0}}));
  const double ratio = pointwise_1d_bound(tr);
  EXPECT_GT(ratio, 0.0);
  EXPECT_LE(ratio, 1.0 + 1e-6);
}

TEST(OriginalRate, ThreeDimTermsAndDeltaForm) {
  const GridSpec g = GridSpec::make(3, 32, 6.0);
  const ComplexField u = two_bumps(g);
  // pointwise signs need the sampled Hessian, which is PSD at every offset
  const WeightOperator sampled(WeightSpec::abs_x(), g, KernelMode::Sampled);
  const OriginalRate r = original_morawetz_rate(u, Model::power({{1.0, 3.0}}), sampled);
  const RealField rho = density(u);
  double scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) scale = std::max(scale, r.hessian_term[i]);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(r.bilaplace_term[i], 2 * std::numbers::pi * rho[i], 1e-14);
    EXPECT_GE(r.hessian_term[i], -1e-8 * scale);
    EXPECT_GE(r.potential_term[i], -1e-8 * scale);
  }
  // -(1/4) Lap|x| * Lap rho is the point mass 2 pi rho against rho
  const WeightOperator op(WeightSpec::abs_x(), g);
  const RealField v = op.conv_lap(laplacian(rho));
  double lhs = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) lhs += -0.25 * v[i] * rho[i] * g.cell_volume();
  const double rhs = 2 * std::numbers::pi * inner(rho, rho);
  EXPECT_NEAR(lhs, rhs, 1e-8 * rhs);
}

TEST(Identity, IntegratedRateMatchesChangeInM) {
  const GridSpec g = GridSpec::make(1, 256, 16.0);
  GaussianData d;
  d.amplitude = 1.3;
  d.velocity = {0.5, 0.0, 0.0};
  HartreeKernel hk;
  for (const Model& m : {Model::power({{1.0, 3.0}}), Model::hartree(hk)}) {
    const TrajectoryRecord tr = propagate(free_gaussian(g, d), {0.0, 0.5, 1e-3, 1, 1e6}, m);
    const MorawetzReport rep = integrated_identity(tr, m);
    EXPECT_LE(rep.identity_relative, 1e-4);
    EXPECT_TRUE(rep.m_nondecreasing);
    EXPECT_GE(rep.min_term_ratio, -1e-8);
    EXPECT_LE(rep.bound_ratio_228, 1.0 + 1e-6);
    EXPECT_LE(rep.max_imag_residue, 1e-10);
  }
}

TEST(Identity, RieszConstantFit) {
  const double want[] = {2.0, 0.0, 8.0 * std::numbers::pi};
  for (int n : {1, 3}) {
    const GridSpec g = GridSpec::make(n, n == 1 ? 256 : 32, n == 1 ? 16.0 : 6.0);
    const TrajectoryRecord tr =
        propagate(two_bumps(g), {0.0, 0.2, 1e-2, 2, 1e6}, Model::power({{1.0, 3.0}}));
    const MorawetzReport rep = integrated_identity(tr, Model::power({{1.0, 3.0}}));
    EXPECT_NEAR(rep.fitted_c, want[n - 1], 1e-6 * want[n - 1]) << "n=" << n;
    EXPECT_LE(rep.fitted_c_deviation, 1e-3);
    EXPECT_EQ(riesz_constant(n), want[n - 1]);
  }
}
