#pragma once

// Command-line front end. Subcommands: blocks, transfer-time,
// validate-analytic, simulate, switch, route, entangle.
//
// Exit codes: 0 success, 1 numerical check failed under --strict or the
// output could not be written, 2 usage or configuration error.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cavityroute/network.hpp"
#include "cavityroute/protocol.hpp"

namespace cavityroute {

enum class Topology { diamond_chain, switch_vertex, hex_lattice, custom };

struct ProtocolConfig {
  bool auto_times = true;
  std::optional<std::pair<double, double>> window;
  int grid_points = 20001;
  std::optional<double> t1, t2;               // chain
  std::optional<double> t;                    // switch
  std::optional<double> t_upload, t_hop;      // lattice
  int port = 1;
  std::vector<int> path;
  std::string block = "H1";
  std::optional<int> source, target;          // 1-based block rows
};

struct RunConfig {
  Topology topology = Topology::diamond_chain;
  int n = 1;
  HexLatticeDescriptor lattice;
  NetworkSpec network;  ///< only for custom
  SystemParams params;
  ProtocolConfig protocol;
  std::string output_path;
  int samples_per_window = 200;

  /// Builds the network for the configured topology.
  NetworkSpec build_network() const;
};

/// Parses a run configuration; throws std::invalid_argument on bad input.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

struct TraceFooter {
  double t_star = 0.0;
  double fidelity = 0.0;
  double phase = 0.0;
  std::vector<std::pair<std::string, double>> extra;  ///< echoed before the final line
};

/// CSV with header `t,F,<labels...>,norm`, 12 significant digits, and a
/// final `# t_star=.. fidelity=.. phase=..` comment line.
void write_trace_csv(const TraceResult& trace, const TraceFooter& footer, std::ostream& out);
/// Throws std::runtime_error when the file cannot be written.
void emit_trace_csv(const TraceResult& trace, const TraceFooter& footer, const std::string& path);

/// Runs one invocation; argv[0] is the program name.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace cavityroute
