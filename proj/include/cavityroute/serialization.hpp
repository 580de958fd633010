#pragma once

// JSON documents for network specs:
//   {"sites":[{"id":0,"label":"1","role":"vertex"},...],
//    "edges":[[k,l,sign],...],
//    "params":{"omega_c":1,"delta":0,"g":65,"j":1}}

#include <string>

#include <nlohmann/json.hpp>

#include "cavityroute/network.hpp"

namespace cavityroute {

void to_json(nlohmann::json& out, const SystemParams& params);
void from_json(const nlohmann::json& in, SystemParams& params);

void to_json(nlohmann::json& out, const NetworkSpec& spec);
void from_json(const nlohmann::json& in, NetworkSpec& spec);

/// {"vertices":[..], "links":[[a, port_a, b, port_b],...], "uploads":[..]}
void to_json(nlohmann::json& out, const HexLatticeDescriptor& desc);
void from_json(const nlohmann::json& in, HexLatticeDescriptor& desc);

std::string network_to_json_string(const NetworkSpec& spec, int indent = 2);
/// Parses and validates; malformed documents raise std::invalid_argument.
NetworkSpec network_from_json_string(const std::string& text);

}  // namespace cavityroute
