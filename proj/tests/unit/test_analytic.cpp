#include <gtest/gtest.h>

#include <vector>

#include "cavityroute/analytic.hpp"
#include "cavityroute/subspaces.hpp"
#include "oracles.hpp"

using namespace cavityroute;

namespace {

std::vector<double> grid(double tmax) {
  std::vector<double> g(101);
  for (int k = 0; k <= 100; ++k) g[static_cast<std::size_t>(k)] = tmax * k / 100.0;
  return g;
}

const AnalyticBlock kBlocks[] = {AnalyticBlock::chain_end, AnalyticBlock::chain_bulk, AnalyticBlock::switch_port,
                                 AnalyticBlock::lattice_hop};

}  // namespace

TEST(Analytic, ConstantsAtDefaults) {
  SystemParams p;
  const AnalyticConstants c = AnalyticConstants::compute(p);
  const double k = std::sqrt(2.0);
  EXPECT_DOUBLE_EQ(c.a, std::sqrt((k + 0.0) * (k + 0.0) + 4.0 * 65.0 * 65.0));
  EXPECT_DOUBLE_EQ(c.a, c.b);
  EXPECT_DOUBLE_EQ(c.c1, 130.0);
  EXPECT_DOUBLE_EQ(c.c2, c.c3);
}

TEST(Analytic, MatchesPropagatorResonantAndDispersive) {
  for (double delta : {0.0, -1000.0, 37.0}) {
    SystemParams p;
    p.delta = delta;
    const double tmax = delta == 0.0 ? 10.0 : 600.0;
    for (AnalyticBlock b : kBlocks) {
      EXPECT_LE(validate_analytic(p, b, grid(tmax)), 1e-9) << to_string(b) << " delta=" << delta;
    }
  }
}

TEST(Analytic, MatchesTaylorOracleColumn) {
  SystemParams p;
  p.delta = 5.0;
  for (AnalyticBlock b : kBlocks) {
    const RealMatrix h = cell_line_matrix(p, analytic_block_cells(b), analytic_block_coupling(b, p));
    for (double t : {0.3, 2.0}) {
      const oracle::CMat u = oracle::expm_taylor(h, t);
      const AmplitudeSet a = analytic_amplitudes(b, p, t);
      EXPECT_LE((a - u.col(1)).cwiseAbs().maxCoeff(), 1e-10) << to_string(b);
    }
  }
}

TEST(Analytic, NormalizedAndStartsAtSource) {
  SystemParams p;
  p.delta = -1000.0;
  for (AnalyticBlock b : kBlocks) {
    const AmplitudeSet a0 = analytic_amplitudes(b, p, 0.0);
    EXPECT_NEAR(std::abs(a0(1) - Complex(1.0, 0.0)), 0.0, 1e-12);
    for (double t : grid(600.0)) EXPECT_NEAR(analytic_amplitudes(b, p, t).squaredNorm(), 1.0, 1e-9);
  }
}

TEST(Analytic, DetectsWrongCandidate) {
  SystemParams p;
  const auto broken = [&](double t) {
    AmplitudeSet a = analytic_u4(p, std::sqrt(2.0), t);
    a(3) = -a(3);
    return a;
  };
  EXPECT_GE(validate_amplitudes(p, AnalyticBlock::chain_end, grid(10.0), broken), 0.1);
  EXPECT_THROW(validate_analytic(p, AnalyticBlock::chain_end, {}), std::invalid_argument);
}

TEST(Analytic, BlockNames) {
  for (AnalyticBlock b : kBlocks) EXPECT_EQ(analytic_block_from_string(to_string(b)), b);
  EXPECT_THROW(analytic_block_from_string("H7"), std::invalid_argument);
  EXPECT_EQ(analytic_block_cells(AnalyticBlock::lattice_hop), 3);
  EXPECT_DOUBLE_EQ(analytic_block_coupling(AnalyticBlock::switch_port, SystemParams{}), 2.0);
}
