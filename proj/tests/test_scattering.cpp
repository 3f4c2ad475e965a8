#include <gtest/gtest.h>

#include "morlab/morlab.hpp"

using namespace morlab;

namespace {

ScatterReport verdict_from(const ComplexField& u0, double t0, double t1, double dt, const Model& m,
                           double threshold = 1e-3) {
  const TrajectoryRecord tr = propagate(u0, {t0, t1, dt, static_cast<int>(std::lround(0.5 / dt)), 1e6}, m);
  return scatter_verdict(tr, threshold);
}

}  // namespace

TEST(Scatter, FreeRoundTripExact) {
  const GridSpec g = GridSpec::make(1, 512, 32.0);
  GaussianData d;
  d.velocity = {0.3, 0.0, 0.0};
  const ComplexField u_plus = free_gaussian(g, d);
  const WaveOperatorResult w = wave_operator_solve(u_plus, 5.0, Model::free(), 1e-10);
  ASSERT_TRUE(w.converged);
  const ScatterReport rep = verdict_from(w.u_T, 5.0, 20.0, 0.05, Model::free());
  EXPECT_LE(h1_distance(rep.u_plus, u_plus), 1e-12);
  EXPECT_LE(rep.tail_sup, 1e-12);
  EXPECT_TRUE(rep.converged);
}

TEST(Scatter, DefocusingSepticConverges) {
  const GridSpec g = GridSpec::make(1, 2048, 128.0);
  const ScatterReport rep = verdict_from(free_gaussian(g, {}), 0.0, 40.0, 5e-3, Model::power({{1.0, 7.0}}));
  EXPECT_LE(rep.tail_sup, 1e-3);
  EXPECT_TRUE(rep.converged);
  EXPECT_GT(rep.decay_exponent, 0.0);
  ASSERT_EQ(rep.cauchy_matrix.size(), rep.selected.size());
  for (std::size_t a = 0; a < rep.selected.size(); ++a) EXPECT_EQ(rep.cauchy_matrix[a][a], 0.0);
}

TEST(Scatter, SolitonDoesNotConverge) {
  const GridSpec g = GridSpec::make(1, 1024, 40.0);
  const ScatterReport rep =
      verdict_from(cubic_soliton(g, 1.0, 0.0), 0.0, 20.0, 5e-3, Model::power({{-1.0, 3.0}}));
  EXPECT_FALSE(rep.converged);
  EXPECT_GT(rep.tail_sup, 0.1);
}

TEST(Scatter, ShortWindowRejected) {
  const GridSpec g = GridSpec::make(1, 64, 8.0);
  const TrajectoryRecord tr = propagate(free_gaussian(g, {}), {0.0, 5.0, 0.1, 5, 1e6}, Model::free());
  EXPECT_THROW(scatter_verdict(tr, 1e-3), InvalidArgument);
}

TEST(WaveOperator, SmallDataRoundTrip) {
  const GridSpec g = GridSpec::make(1, 1024, 64.0);
  GaussianData d;
  d.amplitude = 0.5;
  const ComplexField u_plus = free_gaussian(g, d);
  const Model m = Model::power({{1.0, 7.0}});
  const double tol = 1e-8;
  const WaveOperatorResult w = wave_operator_solve(u_plus, 10.0, m, tol);
  ASSERT_TRUE(w.converged);
  EXPECT_LE(w.defect, tol);
  const ScatterReport rep = verdict_from(w.u_T, w.T, w.T + w.horizon, 1e-3, m, 1.0);
  EXPECT_LE(h1_distance(rep.u_plus, u_plus), 3 * tol);
  // mass is preserved by the interaction picture
  EXPECT_NEAR(lp_norm(w.u_T, 2.0), lp_norm(u_plus, 2.0), 1e-6);
}

TEST(WaveOperator, TighterToleranceShrinksDefect) {
  const GridSpec g = GridSpec::make(1, 1024, 64.0);
  const Model m = Model::power({{1.0, 7.0}});
  const WaveOperatorResult a = wave_operator_solve(free_gaussian(g, {}), 1.0, m, 1e-6);
  const WaveOperatorResult b = wave_operator_solve(free_gaussian(g, {}), 1.0, m, 1e-7);
  ASSERT_TRUE(a.converged && b.converged);
  EXPECT_LE(b.defect, 1e-7);
  EXPECT_LE(b.defect, a.defect / 5);
  EXPECT_GT(b.iterations, a.iterations);
}
