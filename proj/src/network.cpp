#include "cavityroute/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace cavityroute {

void SystemParams::validate() const {
  if (!std::isfinite(omega_c) || !std::isfinite(delta) || !std::isfinite(g) ||
      !std::isfinite(j)) {
    throw std::invalid_argument("system parameters must be finite");
  }
  if (g <= 0.0) throw std::invalid_argument("atom-cavity coupling g must be positive");
  if (j <= 0.0) throw std::invalid_argument("hopping j must be positive");
}

std::string to_string(SiteRole role) {
  switch (role) {
    case SiteRole::vertex: return "vertex";
    case SiteRole::control: return "control";
    case SiteRole::port: return "port";
    case SiteRole::upload: return "upload";
    case SiteRole::plain: return "plain";
  }
  return "plain";
}

SiteRole site_role_from_string(const std::string& text) {
  if (text == "vertex") return SiteRole::vertex;
  if (text == "control") return SiteRole::control;
  if (text == "port") return SiteRole::port;
  if (text == "upload") return SiteRole::upload;
  if (text == "plain") return SiteRole::plain;
  throw std::invalid_argument("unknown site role '" + text + "'");
}

int NetworkSpec::coupling_sign(SiteId a, SiteId b) const {
  for (const auto& e : edges) {
    if ((e.k == a && e.l == b) || (e.k == b && e.l == a)) return e.sign;
  }
  return 0;
}

void NetworkSpec::validate() const {
  params.validate();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].id != i) {
      throw std::invalid_argument("site ids must be 0-based and match their position");
    }
  }
  std::set<std::pair<SiteId, SiteId>> seen;
  for (const auto& e : edges) {
    if (e.k >= sites.size() || e.l >= sites.size()) {
      throw std::invalid_argument("edge references a site id out of range");
    }
    if (e.k == e.l) throw std::invalid_argument("self-loop on site " + std::to_string(e.k));
    if (e.sign != 1 && e.sign != -1) throw std::invalid_argument("edge sign must be +1 or -1");
    auto key = std::minmax(e.k, e.l);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("duplicate edge between sites " + std::to_string(key.first) +
                                  " and " + std::to_string(key.second));
    }
  }
}

int hadamard_sign(int i, int j) {
  if (i < 0 || i > 3 || j < 0 || j > 3) throw std::out_of_range("hadamard index out of range");
  static constexpr int kRows[4][4] = {
      {1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
  return kRows[i][j];
}

NetworkSpec build_diamond_chain(int n, const SystemParams& params) {
  if (n < 1) throw std::invalid_argument("diamond chain needs N >= 1");
  params.validate();

  NetworkSpec spec;
  spec.params = params;
  const int m = 3 * n + 1;
  spec.sites.reserve(m);
  for (int s = 1; s <= m; ++s) {
    // 1-based labelling: 3n-1 and 3n are control sites, 3n-2 and 3N+1 vertices.
    SiteRole role = (s % 3 == 1) ? SiteRole::vertex : SiteRole::control;
    spec.sites.push_back({static_cast<SiteId>(s - 1), std::to_string(s), role});
  }
  auto add = [&spec](int k, int l, int sign) {
    spec.edges.push_back({static_cast<SiteId>(k - 1), static_cast<SiteId>(l - 1), sign});
  };
  for (int i = 1; i <= n; ++i) {
    add(3 * i - 2, 3 * i - 1, +1);
    add(3 * i - 2, 3 * i, +1);
    add(3 * i - 1, 3 * i + 1, +1);
    add(3 * i, 3 * i + 1, -1);
  }
  return spec;
}

NetworkSpec build_switch(const SystemParams& params) {
  params.validate();
  NetworkSpec spec;
  spec.params = params;
  for (int j = 0; j < 4; ++j) {
    spec.sites.push_back({static_cast<SiteId>(j), "nu" + std::to_string(j),
                          j == 0 ? SiteRole::upload : SiteRole::port});
  }
  for (int i = 0; i < 4; ++i) {
    spec.sites.push_back({static_cast<SiteId>(4 + i), "mu" + std::to_string(i), SiteRole::control});
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      spec.edges.push_back({static_cast<SiteId>(4 + i), static_cast<SiteId>(j), hadamard_sign(i, j)});
    }
  }
  return spec;
}

std::size_t HexLatticeDescriptor::vertex_position(int vertex) const {
  auto it = std::find(vertices.begin(), vertices.end(), vertex);
  if (it == vertices.end()) {
    throw std::invalid_argument("unknown lattice vertex " + std::to_string(vertex));
  }
  return static_cast<std::size_t>(it - vertices.begin());
}

bool HexLatticeDescriptor::has_upload(int vertex) const {
  return std::find(uploads.begin(), uploads.end(), vertex) != uploads.end();
}

void HexLatticeDescriptor::validate() const {
  std::set<int> ids(vertices.begin(), vertices.end());
  if (ids.size() != vertices.size()) throw std::invalid_argument("duplicate lattice vertex id");

  std::set<std::pair<int, int>> used;
  auto claim = [&](int vertex, int port) {
    if (!ids.count(vertex)) {
      throw std::invalid_argument("link references unknown vertex " + std::to_string(vertex));
    }
    if (port < 1 || port > 3) {
      throw std::invalid_argument("planar port index must be 1, 2 or 3");
    }
    if (!used.insert({vertex, port}).second) {
      throw std::invalid_argument("port slot " + std::to_string(port) + " of vertex " +
                                  std::to_string(vertex) + " is used twice");
    }
  };
  for (const auto& link : links) {
    if (link.vertex_a == link.vertex_b) throw std::invalid_argument("link joins a vertex to itself");
    claim(link.vertex_a, link.port_a);
    claim(link.vertex_b, link.port_b);
  }
  std::set<int> up;
  for (int v : uploads) {
    if (!ids.count(v)) throw std::invalid_argument("upload on unknown vertex " + std::to_string(v));
    if (!up.insert(v).second) throw std::invalid_argument("duplicate upload vertex");
  }
}

HexLayout hex_layout(const HexLatticeDescriptor& desc) {
  desc.validate();
  HexLayout layout;
  const std::size_t nv = desc.vertices.size();
  layout.inner.resize(nv);
  layout.slot_site.resize(nv);

  std::vector<std::array<bool, 4>> linked(nv, {false, false, false, false});
  for (const auto& link : desc.links) {
    linked[desc.vertex_position(link.vertex_a)][link.port_a] = true;
    linked[desc.vertex_position(link.vertex_b)][link.port_b] = true;
  }

  SiteId next = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    for (int i = 0; i < 4; ++i) layout.inner[v][i] = next++;
    for (int slot = 0; slot < 4; ++slot) {
      if (!linked[v][slot]) layout.slot_site[v][slot] = next++;
    }
  }
  for (const auto& link : desc.links) {
    SiteId site = next++;
    layout.link_site.push_back(site);
    layout.slot_site[desc.vertex_position(link.vertex_a)][link.port_a] = site;
    layout.slot_site[desc.vertex_position(link.vertex_b)][link.port_b] = site;
  }
  layout.num_sites = next;
  return layout;
}

NetworkSpec build_hex_lattice(const HexLatticeDescriptor& desc, const SystemParams& params) {
  params.validate();
  const HexLayout layout = hex_layout(desc);

  NetworkSpec spec;
  spec.params = params;
  spec.sites.resize(layout.num_sites);
  for (SiteId s = 0; s < layout.num_sites; ++s) spec.sites[s].id = s;

  for (std::size_t k = 0; k < desc.links.size(); ++k) {
    const auto& link = desc.links[k];
    auto& site = spec.sites[layout.link_site[k]];
    site.label = "link" + std::to_string(link.vertex_a) + "-" + std::to_string(link.vertex_b);
    site.role = SiteRole::port;
  }
  for (std::size_t v = 0; v < desc.vertices.size(); ++v) {
    const std::string prefix = "v" + std::to_string(desc.vertices[v]) + ".";
    for (int i = 0; i < 4; ++i) {
      auto& site = spec.sites[layout.inner[v][i]];
      site.label = prefix + "mu" + std::to_string(i);
      site.role = SiteRole::control;
    }
    for (int slot = 0; slot < 4; ++slot) {
      auto& site = spec.sites[layout.slot_site[v][slot]];
      if (!site.label.empty()) continue;  // link site
      site.label = prefix + "nu" + std::to_string(slot);
      site.role = (slot == 0 && desc.has_upload(desc.vertices[v])) ? SiteRole::upload
                                                                    : SiteRole::plain;
    }
  }

  // Each vertex contributes only coupling terms; on-site energies come from the
  // site list, so a link site shared by two vertices is counted once.
  for (std::size_t v = 0; v < desc.vertices.size(); ++v) {
    for (int i = 0; i < 4; ++i) {
      for (int slot = 0; slot < 4; ++slot) {
        spec.edges.push_back({layout.inner[v][i], layout.slot_site[v][slot], hadamard_sign(i, slot)});
      }
    }
  }
  return spec;
}

RealMatrix build_single_excitation_hamiltonian(const NetworkSpec& spec) {
  spec.validate();
  const auto& p = spec.params;
  const Eigen::Index dim = static_cast<Eigen::Index>(spec.dim());
  RealMatrix h = RealMatrix::Zero(dim, dim);
  for (SiteId s = 0; s < spec.num_sites(); ++s) {
    const auto c = static_cast<Eigen::Index>(cavity_index(s));
    const auto a = static_cast<Eigen::Index>(atom_index(s));
    h(c, c) = p.omega_c;
    h(a, a) = p.omega_a();
    h(c, a) = p.g;
    h(a, c) = p.g;
  }
  for (const auto& e : spec.edges) {
    const auto ck = static_cast<Eigen::Index>(cavity_index(e.k));
    const auto cl = static_cast<Eigen::Index>(cavity_index(e.l));
    h(ck, cl) = e.sign * p.j;
    h(cl, ck) = e.sign * p.j;
  }
  return h;
}

}  // namespace cavityroute
