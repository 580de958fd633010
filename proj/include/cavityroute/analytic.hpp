#pragma once

// Closed-form amplitudes of the 4x4 (two cells) and 6x6 (three cells) blocks
// started from the atom of the first cell.
//
// Output order follows the block basis: (c_1, a_1, c_2, a_2[, c_3, a_3]).
// validate_analytic checks every expression against the numeric propagator.

#include <functional>
#include <span>

#include "cavityroute/network.hpp"
#include "cavityroute/propagator.hpp"

namespace cavityroute {

struct AnalyticConstants {
  double a = 0.0;   ///< sqrt((k + D)^2 + 4G^2), k the cell coupling
  double b = 0.0;   ///< sqrt((k - D)^2 + 4G^2)
  double c1 = 0.0;  ///< sqrt(D^2 + 4G^2)
  double c2 = 0.0;  ///< sqrt(4G^2 + (sqrt(2) k + D)^2)
  double c3 = 0.0;  ///< sqrt(4G^2 + (sqrt(2) k - D)^2)

  /// With coupling = sqrt(2) J these are the chain constants A, B, C1, C2, C3.
  static AnalyticConstants compute(const SystemParams& params, double coupling);
  static AnalyticConstants compute(const SystemParams& params);
};

using AmplitudeSet = ComplexVector;

/// Two cells coupled by `coupling` (sqrt(2) J for H_1, 2J for H_mu_i).
AmplitudeSet analytic_u4(const SystemParams& params, double coupling, double t);

/// Three cells in a line coupled by `coupling` (sqrt(2) J for the chain bulk,
/// 2J for the lattice hop).
AmplitudeSet analytic_u6(const SystemParams& params, double coupling, double t);

enum class AnalyticBlock { chain_end, chain_bulk, switch_port, lattice_hop };

const char* to_string(AnalyticBlock block);
AnalyticBlock analytic_block_from_string(const std::string& text);
int analytic_block_cells(AnalyticBlock block);
double analytic_block_coupling(AnalyticBlock block, const SystemParams& params);

/// Closed-form amplitudes for a named block.
AmplitudeSet analytic_amplitudes(AnalyticBlock block, const SystemParams& params, double t);

/// Max over grid and components of |candidate(t) - numeric(t)|, the numeric
/// side coming from the eigendecomposition of the explicit block matrix.
double validate_amplitudes(const SystemParams& params, AnalyticBlock block,
                           std::span<const double> grid,
                           const std::function<AmplitudeSet(double)>& candidate);

/// validate_amplitudes with the closed forms above.
double validate_analytic(const SystemParams& params, AnalyticBlock block,
                         std::span<const double> grid);

}  // namespace cavityroute
