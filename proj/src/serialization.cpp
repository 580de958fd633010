#include "cavityroute/serialization.hpp"

#include <stdexcept>

namespace cavityroute {

void to_json(nlohmann::json& out, const SystemParams& params) {
  out = nlohmann::json{{"omega_c", params.omega_c},
                       {"delta", params.delta},
                       {"g", params.g},
                       {"j", params.j}};
}

void from_json(const nlohmann::json& in, SystemParams& params) {
  params.omega_c = in.at("omega_c").get<double>();
  params.delta = in.at("delta").get<double>();
  params.g = in.at("g").get<double>();
  params.j = in.at("j").get<double>();
}

void to_json(nlohmann::json& out, const NetworkSpec& spec) {
  auto sites = nlohmann::json::array();
  for (const auto& s : spec.sites) {
    sites.push_back({{"id", s.id}, {"label", s.label}, {"role", to_string(s.role)}});
  }
  auto edges = nlohmann::json::array();
  for (const auto& e : spec.edges) edges.push_back({e.k, e.l, e.sign});
  out = nlohmann::json{{"sites", sites}, {"edges", edges}, {"params", spec.params}};
}

void from_json(const nlohmann::json& in, NetworkSpec& spec) {
  spec.sites.clear();
  spec.edges.clear();
  for (const auto& s : in.at("sites")) {
    spec.sites.push_back({s.at("id").get<SiteId>(), s.at("label").get<std::string>(),
                          site_role_from_string(s.at("role").get<std::string>())});
  }
  for (const auto& e : in.at("edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw std::invalid_argument("edge entries must be [k, l, sign]");
    }
    spec.edges.push_back({e[0].get<SiteId>(), e[1].get<SiteId>(), e[2].get<int>()});
  }
  spec.params = in.at("params").get<SystemParams>();
}

void to_json(nlohmann::json& out, const HexLatticeDescriptor& desc) {
  auto links = nlohmann::json::array();
  for (const auto& l : desc.links) links.push_back({l.vertex_a, l.port_a, l.vertex_b, l.port_b});
  out = nlohmann::json{{"vertices", desc.vertices}, {"links", links}, {"uploads", desc.uploads}};
}

void from_json(const nlohmann::json& in, HexLatticeDescriptor& desc) {
  desc.vertices = in.at("vertices").get<std::vector<int>>();
  desc.links.clear();
  for (const auto& l : in.at("links")) {
    if (!l.is_array() || l.size() != 4) {
      throw std::invalid_argument("link entries must be [vertex_a, port_a, vertex_b, port_b]");
    }
    desc.links.push_back({l[0].get<int>(), l[1].get<int>(), l[2].get<int>(), l[3].get<int>()});
  }
  desc.uploads = in.value("uploads", std::vector<int>{});
}

std::string network_to_json_string(const NetworkSpec& spec, int indent) {
  return nlohmann::json(spec).dump(indent);
}

NetworkSpec network_from_json_string(const std::string& text) {
  NetworkSpec spec;
  try {
    spec = nlohmann::json::parse(text).get<NetworkSpec>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed network document: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace cavityroute
