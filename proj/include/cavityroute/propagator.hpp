#pragma once

// Exact unitary evolution in the single-excitation sector via the real
// symmetric eigendecomposition H = V diag(lambda) V^T, plus the population
// metrics and transfer-time search built on it.

#include <complex>
#include <cstddef>

#include "cavityroute/network.hpp"

namespace cavityroute {

using Complex = std::complex<double>;

/// alpha |vacuum> + sum_k amps[k] |k>, amps indexed like the Hamiltonian.
struct ExcitationState {
  Complex vac{0.0, 0.0};
  ComplexVector amps;

  std::size_t dim() const { return static_cast<std::size_t>(amps.size()); }
  double norm_squared() const { return std::norm(vac) + amps.squaredNorm(); }

  /// |index> with unit amplitude.
  static ExcitationState basis(std::size_t dim, std::size_t index);
  /// Qubit encoding alpha|0> + beta|1> with |1> stored at `index`.
  static ExcitationState qubit(std::size_t dim, std::size_t index, Complex alpha, Complex beta);
};

class Spectrum {
 public:
  Spectrum(RealVector eigenvalues, RealMatrix eigenvectors);

  const RealVector& eigenvalues() const { return eigenvalues_; }
  const RealMatrix& eigenvectors() const { return eigenvectors_; }
  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues_.size()); }

  /// <target| exp(-i H t) |source> for standard basis indices.
  Complex amplitude(std::size_t source, std::size_t target, double t) const;

 private:
  RealVector eigenvalues_;
  RealMatrix eigenvectors_;
};

/// Eigenvalues ascending. Throws std::invalid_argument for non-square or
/// non-symmetric input (tolerance 1e-12 relative to the largest entry).
Spectrum eigendecompose(const RealMatrix& h);

/// exp(-i H t) applied to the excited part; the vacuum amplitude is stationary.
ExcitationState propagate(const Spectrum& s, const ExcitationState& psi, double t);
ComplexVector propagate(const Spectrum& s, const ComplexVector& amps, double t);

/// Total photon number: sum of |amp|^2 over cavity rows.
double photon_population(const ExcitationState& psi);
/// Same, checking that the state matches the network's dimension.
double photon_population(const ExcitationState& psi, const NetworkSpec& spec);

enum class ModeKind { cavity, atom };

double site_population(const ExcitationState& psi, SiteId site, ModeKind kind);

struct TransferSearch {
  double t_lo = 0.0;
  double t_hi = 10.0;
  int grid_points = 20001;
  double refine_tol = 1e-6;
  /// Refined peaks within this distance of the best refined peak count as
  /// perfect transfer.
  double accept_tol = 1e-4;
  /// Accepted peaks closer than this belong to the same passage. Zero means
  /// 5% of the window.
  double cluster_gap = 0.0;
};

struct TransferTime {
  double t_star = 0.0;
  double fidelity = 0.0;  ///< |<target|exp(-iHt)|source>|^2
  double phase = 0.0;     ///< arg of the same amplitude
};

/// Scans the transfer fidelity on a uniform grid, refines the candidate peaks
/// by golden-section search, and returns the best peak of the first passage.
/// Worker threads are capped by CAVITY_ROUTE_THREADS; results do not depend
/// on the thread count.
TransferTime find_transfer_time(const RealMatrix& h, std::size_t source, std::size_t target,
                                const TransferSearch& search = {});
TransferTime find_transfer_time(const Spectrum& s, std::size_t source, std::size_t target,
                                const TransferSearch& search = {});

/// Threads used for grid scans: CAVITY_ROUTE_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
unsigned scan_thread_count();

}  // namespace cavityroute
