#pragma once

// Collective bases that block-diagonalize the single-excitation Hamiltonian:
// symmetric/antisymmetric pairs for the diamond chain and Hadamard
// combinations around every switch vertex.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cavityroute/network.hpp"

namespace cavityroute {

/// Names one invariant subspace.
///   chain       -> H_n of a diamond chain, index n = 1..N+1
///   switch_port -> H_mu_i of a switch vertex, index i = 0..3
///   lattice_hop -> H_mu,lambda joining two vertices through a link site
///   cell        -> an uncoupled atom-cavity site (2x2)
struct BlockSelector {
  enum class Kind { chain, switch_port, lattice_hop, cell };

  Kind kind = Kind::chain;
  int index = 1;

  /// "H1", "H2", ..., "Hmu0".."Hmu3", "Hmulambda", "cell".
  std::string name() const;
  static BlockSelector parse(const std::string& text);

  bool operator==(const BlockSelector&) const = default;
};

struct BasisGroup {
  std::vector<std::size_t> members;  ///< rows of the transform, in block order
  BlockSelector origin;
};

/// Rows of `basis` are the new basis vectors written in the standard basis,
/// so the transformed Hamiltonian is basis * H * basis^T.
struct OrthogonalTransform {
  RealMatrix basis;
  std::vector<std::string> labels;
  std::vector<BasisGroup> groups;

  std::size_t dim() const { return static_cast<std::size_t>(basis.rows()); }
  /// Row index of a label; throws std::invalid_argument if absent.
  std::size_t row_of(const std::string& label) const;

  /// Identity basis with a single group holding everything.
  static OrthogonalTransform identity(std::size_t dim);
};

struct BlockHamiltonian {
  RealMatrix matrix;
  std::vector<std::string> basis_labels;
  BlockSelector origin;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
};

struct BlockDecomposition {
  std::vector<BlockHamiltonian> blocks;
  double residual = 0.0;  ///< max |entry| coupling two different groups
};

/// Basis vectors c_n, a_n, c_n^+-, a_n^+- of the diamond chain with 3N+1
/// sites, grouped as H_1, H_2, ..., H_{N+1}.
OrthogonalTransform chain_collective_basis(int n);

/// Hadamard basis xi_{mu i}^{c,a} around the given vertices. Every other site
/// passes through unchanged. The outer site at slot j of a vertex is found from
/// its coupling signs, which must equal Hadamard row j. Groups pair each
/// xi_{mu j} with the site at slot j, merged across vertices sharing a link.
OrthogonalTransform lattice_collective_basis(const NetworkSpec& spec,
                                             std::span<const std::array<SiteId, 4>> vertices);

/// Single-vertex form of lattice_collective_basis. `inner` must hold exactly
/// four site ids in port order.
OrthogonalTransform switch_collective_basis(const NetworkSpec& spec, std::span<const SiteId> inner);

/// Transforms h and cuts it along the transform's groups.
BlockDecomposition block_decompose(const RealMatrix& h, const OrthogonalTransform& t);

/// Explicit matrix of a line of `cells` atom-cavity cells whose neighbouring
/// cavities couple with strength `coupling`. Basis order c_1, a_1, c_2, a_2, ...
RealMatrix cell_line_matrix(const SystemParams& params, int cells, double coupling);

/// Closed-form block for a selector, built from the spec's parameters:
/// 4x4 with coupling sqrt(2) J for H_1 / H_{N+1}, 6x6 with sqrt(2) J for the
/// chain bulk, 4x4 with 2J for H_mu_i and 6x6 with 2J for H_mu,lambda.
BlockHamiltonian extract_block(const NetworkSpec& spec, const BlockSelector& which);

}  // namespace cavityroute
