#include "cavityroute/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace cavityroute {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::string chain_label(const char* kind, int n, const char* suffix = "") {
  return std::string(kind) + "_" + std::to_string(n) + suffix;
}

// Minimal union-find over site ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string BlockSelector::name() const {
  switch (kind) {
    case Kind::chain: return "H" + std::to_string(index);
    case Kind::switch_port: return "Hmu" + std::to_string(index);
    case Kind::lattice_hop: return "Hmulambda";
    case Kind::cell: return "cell";
  }
  return "cell";
}

BlockSelector BlockSelector::parse(const std::string& text) {
  auto parse_index = [&text](std::size_t offset) {
    const std::string digits = text.substr(offset);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
      throw std::invalid_argument("unknown block selector '" + text + "'");
    }
    return std::stoi(digits);
  };
  if (text == "Hmulambda") return {Kind::lattice_hop, 0};
  if (text == "cell") return {Kind::cell, 0};
  if (text.rfind("Hmu", 0) == 0) {
    int i = parse_index(3);
    if (i > 3) throw std::invalid_argument("switch port selector must be Hmu0..Hmu3");
    return {Kind::switch_port, i};
  }
  if (text.rfind("H", 0) == 0) {
    int n = parse_index(1);
    if (n < 1) throw std::invalid_argument("chain block selector starts at H1");
    return {Kind::chain, n};
  }
  throw std::invalid_argument("unknown block selector '" + text + "'");
}

std::size_t OrthogonalTransform::row_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::invalid_argument("no basis vector labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

OrthogonalTransform OrthogonalTransform::identity(std::size_t dim) {
  OrthogonalTransform t;
  const auto d = static_cast<Eigen::Index>(dim);
  t.basis = RealMatrix::Identity(d, d);
  BasisGroup all;
  all.origin = {BlockSelector::Kind::cell, 0};
  for (std::size_t r = 0; r < dim; ++r) {
    t.labels.push_back((r % 2 == 0 ? "c_" : "a_") + std::to_string(r / 2 + 1));
    all.members.push_back(r);
  }
  t.groups.push_back(std::move(all));
  return t;
}

OrthogonalTransform chain_collective_basis(int n) {
  if (n < 1) throw std::invalid_argument("diamond chain needs N >= 1");
  const int m = 3 * n + 1;
  const Eigen::Index dim = 2 * m;

  OrthogonalTransform t;
  t.basis = RealMatrix::Zero(dim, dim);
  t.labels.resize(static_cast<std::size_t>(dim));

  // Row r of the transform sits on the row of the standard basis it replaces.
  auto set_single = [&](Eigen::Index row, Eigen::Index column, std::string label) {
    t.basis(row, column) = 1.0;
    t.labels[static_cast<std::size_t>(row)] = std::move(label);
  };
  for (int k = 1; k <= n; ++k) {
    const Eigen::Index v = 3 * k - 3;  // 0-based vertex site 3k-2
    const Eigen::Index p = v + 1;
    const Eigen::Index q = v + 2;
    set_single(2 * v, 2 * v, chain_label("c", k));
    set_single(2 * v + 1, 2 * v + 1, chain_label("a", k));
    t.basis(2 * p, 2 * p) = kInvSqrt2;
    t.basis(2 * p, 2 * q) = kInvSqrt2;
    t.basis(2 * p + 1, 2 * p + 1) = kInvSqrt2;
    t.basis(2 * p + 1, 2 * q + 1) = kInvSqrt2;
    t.basis(2 * q, 2 * p) = kInvSqrt2;
    t.basis(2 * q, 2 * q) = -kInvSqrt2;
    t.basis(2 * q + 1, 2 * p + 1) = kInvSqrt2;
    t.basis(2 * q + 1, 2 * q + 1) = -kInvSqrt2;
    t.labels[2 * p] = chain_label("c", k, "^+");
    t.labels[2 * p + 1] = chain_label("a", k, "^+");
    t.labels[2 * q] = chain_label("c", k, "^-");
    t.labels[2 * q + 1] = chain_label("a", k, "^-");
  }
  set_single(dim - 2, dim - 2, chain_label("c", n + 1));
  set_single(dim - 1, dim - 1, chain_label("a", n + 1));

  auto rows = [&](const std::vector<std::string>& names) {
    std::vector<std::size_t> out;
    for (const auto& name : names) out.push_back(t.row_of(name));
    return out;
  };
  using K = BlockSelector::Kind;
  t.groups.push_back({rows({"c_1", "a_1", "c_1^+", "a_1^+"}), {K::chain, 1}});
  for (int k = 1; k < n; ++k) {
    t.groups.push_back({rows({chain_label("c", k, "^-"), chain_label("a", k, "^-"),
                              chain_label("c", k + 1), chain_label("a", k + 1),
                              chain_label("c", k + 1, "^+"), chain_label("a", k + 1, "^+")}),
                        {K::chain, k + 1}});
  }
  t.groups.push_back({rows({chain_label("c", n, "^-"), chain_label("a", n, "^-"),
                            chain_label("c", n + 1), chain_label("a", n + 1)}),
                      {K::chain, n + 1}});
  return t;
}

OrthogonalTransform lattice_collective_basis(const NetworkSpec& spec,
                                             std::span<const std::array<SiteId, 4>> vertices) {
  spec.validate();
  const std::size_t m = spec.num_sites();
  const std::size_t nv = vertices.size();

  struct InnerRef {
    std::size_t vertex;
    int position;
  };
  std::vector<std::optional<InnerRef>> inner_of(m);
  for (std::size_t v = 0; v < nv; ++v) {
    for (int i = 0; i < 4; ++i) {
      const SiteId s = vertices[v][i];
      if (s >= m) throw std::invalid_argument("vertex site id out of range");
      if (inner_of[s]) throw std::invalid_argument("site used as inner site twice");
      inner_of[s] = InnerRef{v, i};
    }
  }

  // Identify the outer site at each slot from its sign pattern.
  std::vector<std::array<std::optional<SiteId>, 4>> slot(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    for (SiteId o = 0; o < m; ++o) {
      std::array<int, 4> signs{};
      bool any = false;
      for (int i = 0; i < 4; ++i) {
        signs[i] = spec.coupling_sign(vertices[v][i], o);
        any = any || signs[i] != 0;
      }
      if (!any) continue;
      if (inner_of[o]) throw std::invalid_argument("inner sites of switch vertices may not be linked");
      int found = -1;
      for (int j = 0; j < 4 && found < 0; ++j) {
        bool match = true;
        for (int i = 0; i < 4; ++i) match = match && signs[i] == hadamard_sign(i, j);
        if (match) found = j;
      }
      if (found < 0) {
        throw std::invalid_argument("site " + spec.sites[o].label +
                                    " is not coupled to a vertex along a Hadamard row");
      }
      if (slot[v][found]) throw std::invalid_argument("two sites occupy the same vertex slot");
      slot[v][found] = o;
    }
    for (int j = 0; j < 4; ++j) {
      if (!slot[v][j]) throw std::invalid_argument("vertex slot " + std::to_string(j) + " is empty");
    }
  }

  const Eigen::Index dim = static_cast<Eigen::Index>(2 * m);
  OrthogonalTransform t;
  t.basis = RealMatrix::Zero(dim, dim);
  t.labels.resize(2 * m);
  const bool single = nv == 1;
  for (SiteId s = 0; s < m; ++s) {
    const auto rc = static_cast<Eigen::Index>(cavity_index(s));
    const auto ra = static_cast<Eigen::Index>(atom_index(s));
    if (!inner_of[s]) {
      t.basis(rc, rc) = 1.0;
      t.basis(ra, ra) = 1.0;
      t.labels[rc] = "c_" + spec.sites[s].label;
      t.labels[ra] = "a_" + spec.sites[s].label;
      continue;
    }
    const auto [v, i] = *inner_of[s];
    for (int k = 0; k < 4; ++k) {
      const double w = 0.5 * hadamard_sign(i, k);
      t.basis(rc, static_cast<Eigen::Index>(cavity_index(vertices[v][k]))) = w;
      t.basis(ra, static_cast<Eigen::Index>(atom_index(vertices[v][k]))) = w;
    }
    const std::string stem =
        single ? "xi_mu" + std::to_string(i) : "xi_v" + std::to_string(v) + "mu" + std::to_string(i);
    t.labels[rc] = stem + "^c";
    t.labels[ra] = stem + "^a";
  }

  DisjointSets sets(m);
  for (std::size_t v = 0; v < nv; ++v) {
    for (int j = 0; j < 4; ++j) sets.unite(vertices[v][j], *slot[v][j]);
  }

  // Collect components in first-seen order: vertex slots, then loose sites.
  std::vector<std::size_t> roots;
  std::vector<std::vector<SiteId>> members;  // ordered cells of each component
  auto component = [&](SiteId s) -> std::vector<SiteId>& {
    const std::size_t r = sets.find(s);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it != roots.end()) return members[static_cast<std::size_t>(it - roots.begin())];
    roots.push_back(r);
    members.emplace_back();
    return members.back();
  };
  for (std::size_t v = 0; v < nv; ++v) {
    for (int j = 0; j < 4; ++j) {
      auto& cells = component(vertices[v][j]);
      if (std::find(cells.begin(), cells.end(), vertices[v][j]) == cells.end()) {
        cells.push_back(vertices[v][j]);
      }
      if (std::find(cells.begin(), cells.end(), *slot[v][j]) == cells.end()) {
        cells.push_back(*slot[v][j]);
      }
    }
  }
  for (SiteId s = 0; s < m; ++s) {
    auto& cells = component(s);
    if (std::find(cells.begin(), cells.end(), s) == cells.end()) cells.push_back(s);
  }

  using K = BlockSelector::Kind;
  for (auto cells : members) {
    BasisGroup group;
    std::size_t xi_count = 0;
    for (SiteId s : cells) xi_count += inner_of[s] ? 1 : 0;
    if (cells.size() == 1 && xi_count == 0) {
      group.origin = {K::cell, 0};
    } else if (cells.size() == 2 && xi_count == 1) {
      // Upload / port block: outer site first, then the Hadamard combination.
      if (inner_of[cells[0]]) std::swap(cells[0], cells[1]);
      group.origin = {K::switch_port, inner_of[cells[1]]->position};
    } else if (cells.size() == 3 && xi_count == 2) {
      // Hop block: xi at the first vertex, link site, xi at the second vertex.
      std::stable_partition(cells.begin(), cells.end(), [&](SiteId s) { return inner_of[s].has_value(); });
      std::swap(cells[1], cells[2]);
      group.origin = {K::lattice_hop, 0};
    } else {
      throw std::invalid_argument("network does not split into switch or hop blocks");
    }
    for (SiteId s : cells) {
      group.members.push_back(cavity_index(s));
      group.members.push_back(atom_index(s));
    }
    t.groups.push_back(std::move(group));
  }
  return t;
}

OrthogonalTransform switch_collective_basis(const NetworkSpec& spec, std::span<const SiteId> inner) {
  if (inner.size() != 4) throw std::invalid_argument("a switch vertex has exactly four inner sites");
  const std::array<SiteId, 4> vertex{inner[0], inner[1], inner[2], inner[3]};
  return lattice_collective_basis(spec, std::span<const std::array<SiteId, 4>>(&vertex, 1));
}

BlockDecomposition block_decompose(const RealMatrix& h, const OrthogonalTransform& t) {
  if (h.rows() != h.cols() || h.rows() != t.basis.rows() || t.basis.rows() != t.basis.cols()) {
    throw std::invalid_argument("Hamiltonian and transform dimensions disagree");
  }
  const RealMatrix hp = t.basis * h * t.basis.transpose();
  const std::size_t dim = t.dim();

  // Rows outside every group form singleton groups.
  std::vector<std::size_t> group_of(dim, 0);
  std::vector<bool> assigned(dim, false);
  for (std::size_t g = 0; g < t.groups.size(); ++g) {
    for (std::size_t r : t.groups[g].members) {
      if (r >= dim || assigned[r]) throw std::invalid_argument("transform groups overlap or overflow");
      group_of[r] = g;
      assigned[r] = true;
    }
  }
  std::size_t next = t.groups.size();
  for (std::size_t r = 0; r < dim; ++r) {
    if (!assigned[r]) group_of[r] = next++;
  }

  BlockDecomposition out;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (group_of[r] != group_of[c]) {
        out.residual = std::max(out.residual, std::abs(hp(static_cast<Eigen::Index>(r),
                                                          static_cast<Eigen::Index>(c))));
      }
    }
  }
  for (const auto& g : t.groups) {
    BlockHamiltonian block;
    const auto n = static_cast<Eigen::Index>(g.members.size());
    block.matrix.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) {
        block.matrix(a, b) = hp(static_cast<Eigen::Index>(g.members[a]),
                                static_cast<Eigen::Index>(g.members[b]));
      }
      block.basis_labels.push_back(t.labels[g.members[a]]);
    }
    block.origin = g.origin;
    out.blocks.push_back(std::move(block));
  }
  return out;
}

RealMatrix cell_line_matrix(const SystemParams& params, int cells, double coupling) {
  if (cells < 1) throw std::invalid_argument("need at least one cell");
  const Eigen::Index dim = 2 * cells;
  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < cells; ++c) {
    h(2 * c, 2 * c) = params.omega_c;
    h(2 * c + 1, 2 * c + 1) = params.omega_c - params.delta;
    h(2 * c, 2 * c + 1) = h(2 * c + 1, 2 * c) = params.g;
    if (c + 1 < cells) h(2 * c, 2 * c + 2) = h(2 * c + 2, 2 * c) = coupling;
  }
  return h;
}

BlockHamiltonian extract_block(const NetworkSpec& spec, const BlockSelector& which) {
  spec.validate();
  const auto& p = spec.params;
  const double sqrt2 = std::sqrt(2.0);
  BlockHamiltonian block;
  block.origin = which;

  using K = BlockSelector::Kind;
  switch (which.kind) {
    case K::chain: {
      const std::size_t m = spec.num_sites();
      if (m < 4 || (m - 1) % 3 != 0) {
        throw std::invalid_argument("chain blocks need a diamond chain with 3N+1 sites");
      }
      const int n = static_cast<int>((m - 1) / 3);
      const int k = which.index;
      if (k < 1 || k > n + 1) {
        throw std::invalid_argument("chain block index must lie in 1..N+1");
      }
      if (k == 1) {
        block.matrix = cell_line_matrix(p, 2, sqrt2 * p.j);
        block.basis_labels = {"c_1", "a_1", "c_1^+", "a_1^+"};
      } else if (k == n + 1) {
        block.matrix = cell_line_matrix(p, 2, sqrt2 * p.j);
        block.basis_labels = {chain_label("c", n, "^-"), chain_label("a", n, "^-"),
                              chain_label("c", n + 1), chain_label("a", n + 1)};
      } else {
        block.matrix = cell_line_matrix(p, 3, sqrt2 * p.j);
        block.basis_labels = {chain_label("c", k - 1, "^-"), chain_label("a", k - 1, "^-"),
                              chain_label("c", k),           chain_label("a", k),
                              chain_label("c", k, "^+"),     chain_label("a", k, "^+")};
      }
      break;
    }
    case K::switch_port: {
      if (which.index < 0 || which.index > 3) throw std::invalid_argument("switch port must be 0..3");
      const std::string i = std::to_string(which.index);
      block.matrix = cell_line_matrix(p, 2, 2.0 * p.j);
      block.basis_labels = {"c_nu" + i, "a_nu" + i, "xi_mu" + i + "^c", "xi_mu" + i + "^a"};
      break;
    }
    case K::lattice_hop:
      block.matrix = cell_line_matrix(p, 3, 2.0 * p.j);
      block.basis_labels = {"xi_mu^c", "xi_mu^a", "c_link", "a_link", "xi_lambda^c", "xi_lambda^a"};
      break;
    case K::cell:
      block.matrix = cell_line_matrix(p, 1, 0.0);
      block.basis_labels = {"c", "a"};
      break;
  }
  return block;
}

}  // namespace cavityroute
