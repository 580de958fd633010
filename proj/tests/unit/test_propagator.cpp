#include <gtest/gtest.h>

#include <cstdlib>

#include "cavityroute/network.hpp"
#include "cavityroute/propagator.hpp"
#include "cavityroute/subspaces.hpp"
#include "oracles.hpp"

using namespace cavityroute;

TEST(Propagator, MatchesTaylorOracle) {
  SystemParams p;
  p.delta = -7.0;
  const RealMatrix h = build_single_excitation_hamiltonian(build_diamond_chain(1, p));
  const Spectrum s = eigendecompose(h);
  for (double t : {0.0, 0.01, 1.7, 9.3}) {
    const oracle::CMat u = oracle::expm_taylor(h, t);
    for (std::size_t a = 0; a < s.dim(); ++a) {
      for (std::size_t b = 0; b < s.dim(); ++b) {
        EXPECT_NEAR(std::abs(s.amplitude(a, b, t) - u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a))),
                    0.0, 1e-10);
      }
    }
  }
}

TEST(Propagator, UnitaryAndComposable) {
  const Spectrum s = eigendecompose(build_single_excitation_hamiltonian(build_switch(SystemParams{})));
  const ExcitationState psi = ExcitationState::qubit(s.dim(), 1, {0.6, 0.0}, {0.0, 0.8});
  const ExcitationState a = propagate(s, psi, 4.2);
  EXPECT_NEAR(a.norm_squared(), 1.0, 1e-12);
  EXPECT_EQ(a.vac, psi.vac);
  const ExcitationState b = propagate(s, propagate(s, psi, 1.9), 2.3);
  EXPECT_LE((a.amps - b.amps).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Propagator, PopulationHelpers) {
  ExcitationState psi = ExcitationState::basis(6, 2);
  EXPECT_DOUBLE_EQ(photon_population(psi), 1.0);
  EXPECT_DOUBLE_EQ(site_population(psi, 1, ModeKind::cavity), 1.0);
  EXPECT_DOUBLE_EQ(site_population(psi, 1, ModeKind::atom), 0.0);
  psi = ExcitationState::basis(6, 3);
  EXPECT_DOUBLE_EQ(photon_population(psi), 0.0);
  EXPECT_THROW(site_population(psi, 3, ModeKind::atom), std::invalid_argument);
  EXPECT_THROW(ExcitationState::basis(4, 4), std::invalid_argument);
}

TEST(Propagator, RejectsNonSymmetricInput) {
  RealMatrix h(2, 2);
  h << 1.0, 2.0, 0.0, 1.0;
  EXPECT_THROW(eigendecompose(h), std::invalid_argument);
  EXPECT_THROW(eigendecompose(RealMatrix::Zero(2, 3)), std::invalid_argument);
}

// Two resonant levels coupled by g: |<1|e^{-iHt}|0>|^2 = sin^2(g t), first
// maximum at pi / (2 g).
TEST(Propagator, TransferTimeOfTwoLevelSystem) {
  RealMatrix h(2, 2);
  h << 0.0, 0.5, 0.5, 0.0;
  TransferSearch search;
  search.t_hi = 5.0;
  const TransferTime tt = find_transfer_time(h, 0, 1, search);
  EXPECT_NEAR(tt.t_star, M_PI, 1e-6);
  EXPECT_NEAR(tt.fidelity, 1.0, 1e-12);
  EXPECT_NEAR(tt.phase, -M_PI / 2.0, 1e-6);
}

TEST(Propagator, TransferTimeOfTwoCellBlock) {
  const RealMatrix h = cell_line_matrix(SystemParams{}, 2, std::sqrt(2.0));
  TransferSearch search;
  search.t_hi = 10.0;
  const TransferTime tt = find_transfer_time(h, 1, 3, search);
  EXPECT_NEAR(tt.t_star, 2.2231, 0.02 * 2.2231);
  EXPECT_GE(tt.fidelity, 0.999);
}

TEST(Propagator, TransferSearchValidation) {
  const RealMatrix h = RealMatrix::Identity(2, 2);
  TransferSearch search;
  search.grid_points = 10;
  EXPECT_THROW(find_transfer_time(h, 0, 1, search), std::invalid_argument);
  search = TransferSearch{};
  search.t_hi = 0.0;
  EXPECT_THROW(find_transfer_time(h, 0, 1, search), std::invalid_argument);
  EXPECT_THROW(find_transfer_time(h, 0, 2, TransferSearch{}), std::invalid_argument);
}

TEST(Propagator, ThreadCapFromEnvironment) {
  ::setenv("CAVITY_ROUTE_THREADS", "1", 1);
  EXPECT_EQ(scan_thread_count(), 1u);
  const RealMatrix h = cell_line_matrix(SystemParams{}, 2, 2.0);
  const TransferTime serial = find_transfer_time(h, 1, 3, TransferSearch{});
  ::setenv("CAVITY_ROUTE_THREADS", "4", 1);
  const TransferTime parallel = find_transfer_time(h, 1, 3, TransferSearch{});
  ::unsetenv("CAVITY_ROUTE_THREADS");
  EXPECT_EQ(serial.t_star, parallel.t_star);
  EXPECT_EQ(serial.fidelity, parallel.fidelity);
}
