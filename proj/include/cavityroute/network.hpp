#pragma once

// Network topology and single-excitation Hamiltonian assembly for arrays of
// coupled cavities, each doped with one two-level atom.
//
// Basis convention for the single-excitation sector of an M-site network:
//   row 2i     -> photon in the cavity of site i
//   row 2i + 1 -> excited atom of site i
// The vacuum (zero-excitation) state is stationary and is not part of the
// matrix; ExcitationState carries its amplitude separately.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cavityroute {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using SiteId = std::size_t;

/// Physical constants in units with hbar = 1.
struct SystemParams {
  double omega_c = 1.0;  ///< cavity mode frequency
  double delta = 0.0;    ///< detuning omega_c - omega_a
  double g = 65.0;       ///< atom-cavity coupling, > 0
  double j = 1.0;        ///< cavity-cavity hopping magnitude, > 0

  /// Atomic transition frequency. Derived, never stored.
  double omega_a() const { return omega_c - delta; }

  /// Throws std::invalid_argument unless g > 0, j > 0 and all values finite.
  void validate() const;

  bool operator==(const SystemParams&) const = default;
};

enum class SiteRole { vertex, control, port, upload, plain };

std::string to_string(SiteRole role);
SiteRole site_role_from_string(const std::string& text);

struct Site {
  SiteId id = 0;
  std::string label;
  SiteRole role = SiteRole::plain;

  bool operator==(const Site&) const = default;
};

/// Cavity-cavity link with coupling sign * J.
struct Edge {
  SiteId k = 0;
  SiteId l = 0;
  int sign = 1;

  bool operator==(const Edge&) const = default;
};

struct NetworkSpec {
  std::vector<Site> sites;
  std::vector<Edge> edges;
  SystemParams params;

  std::size_t num_sites() const { return sites.size(); }
  /// Dimension of the single-excitation sector (2 per site).
  std::size_t dim() const { return 2 * sites.size(); }

  /// Sign of the coupling between two sites, 0 when they are not linked.
  int coupling_sign(SiteId a, SiteId b) const;

  /// Throws std::invalid_argument on self-loops, duplicate pairs, ids out of
  /// range, signs other than +-1, site ids not matching their position, or
  /// invalid parameters.
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

constexpr std::size_t cavity_index(SiteId site) { return 2 * site; }
constexpr std::size_t atom_index(SiteId site) { return 2 * site + 1; }

/// Entry (i, j) of the 4x4 sign matrix of the switch (Sylvester-Hadamard rows
/// in the order (++++), (++--), (+-+-), (+--+)).
int hadamard_sign(int i, int j);

/// Diamond chain of 3N+1 sites. Site labels are 1-based. Vertex cavity 3n-2
/// feeds the control pair (3n-1, 3n) which joins the next vertex 3n+1 with
/// couplings +J and -J respectively.
NetworkSpec build_diamond_chain(int n, const SystemParams& params);

/// Four outer sites nu_0..nu_3 (ids 0-3) and four inner control sites
/// mu_0..mu_3 (ids 4-7); inner i couples to outer j with sign hadamard_sign(i, j).
NetworkSpec build_switch(const SystemParams& params);

struct HexLink {
  int vertex_a = 0;
  int port_a = 1;  ///< planar slot 1..3 at vertex_a
  int vertex_b = 0;
  int port_b = 1;  ///< planar slot 1..3 at vertex_b

  bool operator==(const HexLink&) const = default;
};

struct HexLatticeDescriptor {
  std::vector<int> vertices;
  std::vector<HexLink> links;
  std::vector<int> uploads;  ///< vertices carrying an off-plane port at slot 0

  /// Throws std::invalid_argument on unknown vertices, duplicate vertices,
  /// out-of-range ports, self links or port slot collisions.
  void validate() const;

  /// Position of a vertex id in `vertices`; throws if absent.
  std::size_t vertex_position(int vertex) const;
  bool has_upload(int vertex) const;
};

/// Site ids of a built hex lattice, indexed by vertex position.
struct HexLayout {
  std::vector<std::array<SiteId, 4>> inner;      ///< mu_0..mu_3 of each vertex
  std::vector<std::array<SiteId, 4>> slot_site;  ///< site occupying slot 0..3
  std::vector<SiteId> link_site;                 ///< one per descriptor link
  std::size_t num_sites = 0;
};

/// Deterministic site numbering used by build_hex_lattice: per vertex its four
/// inner sites then its slot-0 site and unused planar slots, followed by one
/// site per link.
HexLayout hex_layout(const HexLatticeDescriptor& desc);

/// Each vertex is a switch whose outer slots are its upload port, its link
/// sites, or dangling sites. Shared link sites get their on-site terms once.
NetworkSpec build_hex_lattice(const HexLatticeDescriptor& desc, const SystemParams& params);

/// Real symmetric matrix of the Hamiltonian in the single-excitation sector.
RealMatrix build_single_excitation_hamiltonian(const NetworkSpec& spec);

}  // namespace cavityroute
