#include <gtest/gtest.h>

#include <cmath>

#include "morlab/morlab.hpp"

using namespace morlab;

namespace {

RealField ramp(const GridSpec& g) {
  RealField rho(g);
  for (std::size_t i = 0; i < g.size(); ++i) rho[i] = 0.05 * static_cast<double>(i % 40);
  return rho;
}

}  // namespace

TEST(PowerModel, PotentialIsAntiderivative) {
  const GridSpec g = GridSpec::make(1, 64, 4.0);
  const Model m = Model::power({{0.7, 3.0}, {-0.2, 6.5}});
  const RealField rho = ramp(g);
  const RealField gr = g_of_rho(m, rho), G = G_of_rho(m, rho), pot = rho_g_minus_G(m, rho);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = rho[i];
    // g = sum lambda r^{(p-1)/2}, G = int_0^r g
    const double gv = 0.7 * r - 0.2 * std::pow(r, 2.75);
    const double Gv = 0.35 * r * r - 0.2 * std::pow(r, 3.75) / 3.75;
    EXPECT_NEAR(gr[i], gv, 1e-14);
    EXPECT_NEAR(G[i], Gv, 1e-14);
    EXPECT_NEAR(pot[i], r * gv - Gv, 1e-14);
  }
}

TEST(PowerModel, Validation) {
  EXPECT_THROW(Model::power({}), InvalidArgument);
  EXPECT_THROW(Model::power({{1.0, 1.0}}), InvalidArgument);
  EXPECT_THROW(Model::power({{1.0, 3.0}, {2.0, 3.0}}), InvalidArgument);
  EXPECT_TRUE(Model::power({{1.0, 3.0}}).defocusing());
  EXPECT_FALSE(Model::power({{1.0, 3.0}, {-1.0, 5.0}}).defocusing());
  EXPECT_TRUE(Model::free().defocusing());
}

TEST(HartreeModel, PotentialMatchesDirectSum) {
  const GridSpec g = GridSpec::make(1, 64, 5.0);
  for (HartreeFamily fam : {HartreeFamily::Gaussian, HartreeFamily::InversePower}) {
    HartreeKernel k;
    k.family = fam;
    k.a = 0.6;
    k.gamma = 0.5;
    k.epsilon = 0.3;
    k.coupling = 1.7;
    const Model m = Model::hartree(k);
    const RealField rho = density(free_gaussian(g, {}));
    const RealField pot = g_of_rho(m, rho);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        s += k.coupling * k.profile(std::abs(g.position(i)[0] - g.position(j)[0])) * rho[j] * g.dx();
      EXPECT_NEAR(pot[i], s, 1e-10);
    }
  }
}

TEST(HartreeModel, ProfileDerivative) {
  HartreeKernel k;
  k.family = HartreeFamily::InversePower;
  k.gamma = 1.2;
  k.epsilon = 0.4;
  for (double r : {0.1, 0.7, 2.5}) {
    const double fd = (k.profile(r + 1e-6) - k.profile(r - 1e-6)) / 2e-6;
    EXPECT_NEAR(k.profile_derivative(r), fd, 1e-7);
  }
  EXPECT_THROW(Model::hartree(k).hartree_operators(GridSpec::make(1, 16, 2.0)), InvalidArgument);
}

TEST(HartreeModel, RadialMonotoneCheck) {
  HartreeKernel k;
  const MonotoneReport rep = radial_monotone_check(k);
  EXPECT_TRUE(rep.nonincreasing);
  EXPECT_LE(rep.max_profile_derivative, 0.0);
  EXPECT_LE(rep.max_pair_value, 1e-12);
  EXPECT_LE(rep.max_quadrature_gap, 1e-6);
  k.coupling = -1.0;
  EXPECT_FALSE(radial_monotone_check(k).nonincreasing);
}
