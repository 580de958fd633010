#include "cavityroute/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cavityroute/analytic.hpp"
#include "cavityroute/serialization.hpp"
#include "cavityroute/subspaces.hpp"

namespace cavityroute {

namespace {

constexpr double kResidualLimit = 1e-12;
constexpr double kPeakFidelityLimit = 0.999;
constexpr double kRouteFidelityLimit = 0.99;
constexpr double kAnalyticLimit = 1e-9;

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string fmt_short(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", value);
  return buf;
}

Topology topology_from_string(const std::string& text) {
  if (text == "diamond_chain") return Topology::diamond_chain;
  if (text == "switch") return Topology::switch_vertex;
  if (text == "hex_lattice") return Topology::hex_lattice;
  if (text == "custom") return Topology::custom;
  throw std::invalid_argument("unknown topology '" + text + "'");
}

// Flags shared by every subcommand.
struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<double> tmax;
  std::optional<int> grid;
  std::optional<int> samples;
  bool strict = false;
};

struct TransferFlags {
  std::string block;
  std::optional<int> source;
  std::optional<int> target;
};

class Session {
 public:
  Session(const CommonFlags& flags, std::ostream& out) : flags_(flags), out_(out) {
    config_ = load_run_config(flags.config);
    if (flags.samples) config_.samples_per_window = *flags.samples;
    if (flags.grid) config_.protocol.grid_points = *flags.grid;
    if (!flags.out.empty()) config_.output_path = flags.out;
  }

  int blocks();
  int transfer_time(const TransferFlags& tf);
  int validate_analytic_cmd();
  int simulate();
  int switch_cmd();
  int route();
  int entangle();

 private:
  struct Program {
    NetworkSpec spec;
    Schedule schedule;
    std::vector<Probe> probes;
    std::vector<std::pair<std::string, double>> times;
  };

  std::pair<double, double> protocol_window() const;
  double default_tmax() const { return config_.params.delta == 0.0 ? 10.0 : 600.0; }
  TransferTime block_transfer(AnalyticBlock block, std::pair<double, double> window);
  double resolve(AnalyticBlock block, const std::optional<double>& explicit_time, const char* name);
  Program chain_program();
  Program switch_program();
  Program route_program();
  Program program_for_topology();
  int run_program(const Program& program, std::vector<std::pair<std::string, double>> extra = {});
  void write_trace(const TraceResult& trace, const TraceFooter& footer) const;

  CommonFlags flags_;
  std::ostream& out_;
  RunConfig config_;
  std::map<std::string, TransferTime> resolved_;
};

std::pair<double, double> Session::protocol_window() const {
  if (flags_.tmax) return {0.0, *flags_.tmax};
  if (config_.protocol.window) return *config_.protocol.window;
  throw std::invalid_argument("automatic transfer times need protocol.window or --tmax");
}

TransferTime Session::block_transfer(AnalyticBlock block, std::pair<double, double> window) {
  const RealMatrix h = cell_line_matrix(config_.params, analytic_block_cells(block),
                                        analytic_block_coupling(block, config_.params));
  TransferSearch search;
  search.t_lo = window.first;
  search.t_hi = window.second;
  search.grid_points = config_.protocol.grid_points;
  return find_transfer_time(h, 1, static_cast<std::size_t>(h.rows() - 1), search);
}

double Session::resolve(AnalyticBlock block, const std::optional<double>& explicit_time,
                        const char* name) {
  if (!config_.protocol.auto_times) {
    if (!explicit_time) {
      throw std::invalid_argument(std::string("explicit times need protocol.") + name);
    }
    return *explicit_time;
  }
  const std::string key = to_string(block);
  auto it = resolved_.find(key);
  if (it == resolved_.end()) it = resolved_.emplace(key, block_transfer(block, protocol_window())).first;
  return it->second.t_star;
}

int Session::blocks() {
  const NetworkSpec spec = config_.build_network();
  OrthogonalTransform transform;
  switch (config_.topology) {
    case Topology::diamond_chain: transform = chain_collective_basis(config_.n); break;
    case Topology::switch_vertex: {
      const auto inner = switch_inner_sites();
      transform = switch_collective_basis(spec, inner);
      break;
    }
    case Topology::hex_lattice: {
      const HexLayout layout = hex_layout(config_.lattice);
      transform = lattice_collective_basis(spec, layout.inner);
      break;
    }
    case Topology::custom: transform = OrthogonalTransform::identity(spec.dim()); break;
  }
  const BlockDecomposition dec = block_decompose(build_single_excitation_hamiltonian(spec), transform);

  std::string sizes;
  for (const auto& b : dec.blocks) sizes += (sizes.empty() ? "" : ",") + std::to_string(b.dim());
  out_ << "blocks: " << sizes << " residual: " << fmt_short(dec.residual) << "\n";
  for (const auto& b : dec.blocks) {
    out_ << "  " << b.origin.name() << " " << b.dim() << "x" << b.dim() << " [";
    for (std::size_t k = 0; k < b.basis_labels.size(); ++k) out_ << (k ? ", " : "") << b.basis_labels[k];
    out_ << "]\n";
  }

  if (!config_.output_path.empty()) {
    std::ofstream file(config_.output_path);
    if (!file) throw std::runtime_error("cannot write " + config_.output_path);
    for (const auto& b : dec.blocks) {
      file << "# " << b.origin.name();
      for (const auto& l : b.basis_labels) file << "," << l;
      file << "\n";
      for (Eigen::Index r = 0; r < b.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < b.matrix.cols(); ++c) file << (c ? "," : "") << fmt(b.matrix(r, c));
        file << "\n";
      }
    }
    if (!file) throw std::runtime_error("cannot write " + config_.output_path);
  }
  return flags_.strict && dec.residual > kResidualLimit ? 1 : 0;
}

int Session::transfer_time(const TransferFlags& tf) {
  const std::string name = tf.block.empty() ? config_.protocol.block : tf.block;
  const AnalyticBlock block = analytic_block_from_string(name);
  const RealMatrix h = cell_line_matrix(config_.params, analytic_block_cells(block),
                                        analytic_block_coupling(block, config_.params));
  const int dim = static_cast<int>(h.rows());
  const int source = tf.source.value_or(config_.protocol.source.value_or(2));
  const int target = tf.target.value_or(config_.protocol.target.value_or(dim));
  if (source < 1 || source > dim || target < 1 || target > dim) {
    throw std::invalid_argument("--source/--target must be 1-based rows of the " + std::to_string(dim) +
                                "x" + std::to_string(dim) + " block");
  }

  TransferSearch search;
  search.t_hi = flags_.tmax ? *flags_.tmax
                            : (config_.protocol.window ? config_.protocol.window->second : default_tmax());
  search.t_lo = (!flags_.tmax && config_.protocol.window) ? config_.protocol.window->first : 0.0;
  search.grid_points = config_.protocol.grid_points;
  const TransferTime tt = find_transfer_time(h, static_cast<std::size_t>(source - 1),
                                             static_cast<std::size_t>(target - 1), search);
  out_ << "block=" << name << " source=" << source << " target=" << target << " t_star=" << fmt(tt.t_star)
       << " fidelity=" << fmt(tt.fidelity) << " phase=" << fmt(tt.phase) << "\n";
  return flags_.strict && tt.fidelity < kPeakFidelityLimit ? 1 : 0;
}

int Session::validate_analytic_cmd() {
  const double tmax = flags_.tmax ? *flags_.tmax
                                  : (config_.protocol.window ? config_.protocol.window->second : default_tmax());
  std::vector<double> grid(101);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = tmax * static_cast<double>(k) / 100.0;
  const char* regime = config_.params.delta == 0.0 ? "resonant" : "dispersive";
  bool ok = true;
  for (AnalyticBlock b : {AnalyticBlock::chain_end, AnalyticBlock::chain_bulk, AnalyticBlock::switch_port,
                          AnalyticBlock::lattice_hop}) {
    const double err = validate_analytic(config_.params, b, grid);
    ok = ok && err <= kAnalyticLimit;
    out_ << to_string(b) << " " << regime << " max_error=" << fmt_short(err) << "\n";
  }
  return flags_.strict && !ok ? 1 : 0;
}

Session::Program Session::chain_program() {
  if (config_.topology != Topology::diamond_chain) {
    throw std::invalid_argument("simulate needs topology diamond_chain");
  }
  Program p;
  p.spec = config_.build_network();
  const double t1 = resolve(AnalyticBlock::chain_end, config_.protocol.t1, "t1");
  const double t2 = config_.n > 1 ? resolve(AnalyticBlock::chain_bulk, config_.protocol.t2, "t2") : t1;
  p.schedule = chain_routing_schedule(config_.n, t1, t2);
  for (int k = 0; k <= config_.n; ++k) {
    const SiteId s = static_cast<SiteId>(3 * k);
    p.probes.push_back(Probe::mode("a" + p.spec.sites[s].label, {s, ModeKind::atom}));
  }
  p.times = {{"t1", t1}};
  if (config_.n > 1) p.times.emplace_back("t2", t2);
  return p;
}

Session::Program Session::switch_program() {
  if (config_.topology != Topology::switch_vertex) throw std::invalid_argument("switch needs topology switch");
  Program p;
  p.spec = config_.build_network();
  const double t = resolve(AnalyticBlock::switch_port, config_.protocol.t, "t");
  p.schedule = switch_schedule(config_.protocol.port, t);
  for (SiteId s = 0; s < 4; ++s) p.probes.push_back(Probe::mode("a_" + p.spec.sites[s].label, {s, ModeKind::atom}));
  p.times = {{"t", t}};
  return p;
}

Session::Program Session::route_program() {
  if (config_.topology != Topology::hex_lattice) throw std::invalid_argument("route needs topology hex_lattice");
  Program p;
  p.spec = config_.build_network();
  const double t_up = resolve(AnalyticBlock::switch_port, config_.protocol.t_upload, "t_upload");
  const double t_hop = resolve(AnalyticBlock::lattice_hop, config_.protocol.t_hop, "t_hop");
  p.schedule = hex_routing_schedule(config_.lattice, config_.protocol.path, t_up, t_hop);

  const HexLayout layout = hex_layout(config_.lattice);
  std::vector<SiteId> watched{p.schedule.source.site};
  for (std::size_t k = 0; k + 1 < config_.protocol.path.size(); ++k) {
    for (std::size_t l = 0; l < config_.lattice.links.size(); ++l) {
      const auto& link = config_.lattice.links[l];
      const int v = config_.protocol.path[k];
      const int w = config_.protocol.path[k + 1];
      if ((link.vertex_a == v && link.vertex_b == w) || (link.vertex_a == w && link.vertex_b == v)) {
        watched.push_back(layout.link_site[l]);
      }
    }
  }
  watched.push_back(p.schedule.target.site);
  for (SiteId s : watched) p.probes.push_back(Probe::mode("a_" + p.spec.sites[s].label, {s, ModeKind::atom}));
  p.times = {{"t_upload", t_up}, {"t_hop", t_hop}};
  return p;
}

Session::Program Session::program_for_topology() {
  switch (config_.topology) {
    case Topology::diamond_chain: return chain_program();
    case Topology::switch_vertex: return switch_program();
    case Topology::hex_lattice: return route_program();
    case Topology::custom: break;
  }
  throw std::invalid_argument("entangle needs a diamond_chain, switch or hex_lattice topology");
}

void Session::write_trace(const TraceResult& trace, const TraceFooter& footer) const {
  if (!config_.output_path.empty()) emit_trace_csv(trace, footer, config_.output_path);
}

int Session::run_program(const Program& program, std::vector<std::pair<std::string, double>> extra) {
  const ExcitationState initial = ExcitationState::basis(program.spec.dim(), program.schedule.source.index());
  const TraceResult trace = run_schedule(program.spec, program.schedule, initial,
                                         config_.samples_per_window, program.probes);
  TraceFooter footer;
  footer.t_star = program.schedule.total_evolution_time();
  footer.fidelity = trace.final_fidelity;
  footer.phase = std::arg(trace.final_amplitude);
  footer.extra = program.times;
  footer.extra.insert(footer.extra.end(), extra.begin(), extra.end());
  write_trace(trace, footer);

  double max_f = 0.0;
  for (double f : trace.f_photon) max_f = std::max(max_f, f);
  for (const auto& [name, value] : footer.extra) out_ << name << "=" << fmt(value) << " ";
  out_ << "T=" << fmt(footer.t_star) << " fidelity=" << fmt(footer.fidelity) << " phase=" << fmt(footer.phase)
       << " max_F=" << fmt(max_f) << "\n";
  return flags_.strict && trace.final_fidelity < kRouteFidelityLimit ? 1 : 0;
}

int Session::simulate() { return run_program(chain_program()); }
int Session::switch_cmd() { return run_program(switch_program()); }
int Session::route() { return run_program(route_program()); }

int Session::entangle() {
  Program program = program_for_topology();
  const EntanglementResult ent = entanglement_transfer(program.spec, program.schedule);
  out_ << "bell_fidelity=" << fmt(ent.bell_fidelity) << " compensation_phase=" << fmt(ent.compensation_phase)
       << " uncompensated_fidelity=" << fmt(ent.uncompensated_fidelity) << " |u|=" << fmt(std::abs(ent.amplitude))
       << "\n";
  program.schedule.steps.push_back(PhaseShift{program.schedule.target.site, ent.compensation_phase});
  const int status = run_program(program, {{"bell_fidelity", ent.bell_fidelity},
                                           {"compensation_phase", ent.compensation_phase}});
  if (status != 0) return status;
  return flags_.strict && ent.bell_fidelity < kRouteFidelityLimit ? 1 : 0;
}

}  // namespace

NetworkSpec RunConfig::build_network() const {
  switch (topology) {
    case Topology::diamond_chain: return build_diamond_chain(n, params);
    case Topology::switch_vertex: return build_switch(params);
    case Topology::hex_lattice: return build_hex_lattice(lattice, params);
    case Topology::custom: {
      NetworkSpec spec = network;
      spec.validate();
      return spec;
    }
  }
  throw std::invalid_argument("unknown topology");
}

RunConfig parse_run_config(const nlohmann::json& doc) {
  try {
    RunConfig cfg;
    if (!doc.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    if (!doc.contains("topology")) throw std::invalid_argument("configuration needs a topology");
    cfg.topology = topology_from_string(doc.at("topology").get<std::string>());

    if (doc.contains("params")) {
      const auto& p = doc.at("params");
      SystemParams defaults;
      cfg.params.omega_c = p.value("omega_c", defaults.omega_c);
      cfg.params.delta = p.value("delta", defaults.delta);
      cfg.params.g = p.value("g", defaults.g);
      cfg.params.j = p.value("j", defaults.j);
    }
    cfg.params.validate();

    switch (cfg.topology) {
      case Topology::diamond_chain:
        cfg.n = doc.value("n", 1);
        if (cfg.n < 1) throw std::invalid_argument("diamond chain needs n >= 1");
        break;
      case Topology::hex_lattice:
        if (!doc.contains("lattice")) throw std::invalid_argument("hex_lattice needs a lattice block");
        cfg.lattice = doc.at("lattice").get<HexLatticeDescriptor>();
        cfg.lattice.validate();
        break;
      case Topology::custom:
        if (!doc.contains("network")) throw std::invalid_argument("custom topology needs a network block");
        cfg.network = doc.at("network").get<NetworkSpec>();
        if (doc.contains("params")) cfg.network.params = cfg.params;
        cfg.network.validate();
        cfg.params = cfg.network.params;
        break;
      case Topology::switch_vertex: break;
    }

    if (doc.contains("protocol")) {
      const auto& p = doc.at("protocol");
      auto& pc = cfg.protocol;
      const std::string times = p.value("times", std::string("auto"));
      if (times != "auto" && times != "explicit") throw std::invalid_argument("protocol.times is auto or explicit");
      pc.auto_times = times == "auto";
      if (p.contains("window")) {
        const auto w = p.at("window").get<std::vector<double>>();
        if (w.size() != 2 || !(w[0] < w[1])) throw std::invalid_argument("protocol.window must be [lo, hi] with lo < hi");
        pc.window = std::make_pair(w[0], w[1]);
      }
      pc.grid_points = p.value("grid", pc.grid_points);
      auto opt = [&p](const char* key) -> std::optional<double> {
        if (!p.contains(key)) return std::nullopt;
        return p.at(key).get<double>();
      };
      pc.t1 = opt("t1");
      pc.t2 = opt("t2");
      pc.t = opt("t");
      pc.t_upload = opt("t_upload");
      pc.t_hop = opt("t_hop");
      pc.port = p.value("port", pc.port);
      pc.path = p.value("path", std::vector<int>{});
      pc.block = p.value("block", pc.block);
      if (p.contains("source")) pc.source = p.at("source").get<int>();
      if (p.contains("target")) pc.target = p.at("target").get<int>();
    }
    if (doc.contains("output")) {
      const auto& o = doc.at("output");
      cfg.output_path = o.value("path", std::string());
      cfg.samples_per_window = o.value("samples_per_window", cfg.samples_per_window);
    }
    if (cfg.samples_per_window < 2) throw std::invalid_argument("samples_per_window must be at least 2");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad configuration: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open configuration " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("configuration " + path + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

void write_trace_csv(const TraceResult& trace, const TraceFooter& footer, std::ostream& out) {
  if (trace.times.empty()) throw std::invalid_argument("trace is empty");
  out << "t,F";
  for (const auto& l : trace.labels) out << "," << l;
  out << ",norm\n";
  char norm_buf[64];
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << fmt(trace.times[k]) << "," << fmt(trace.f_photon[k]);
    for (double v : trace.tracked[k]) out << "," << fmt(v);
    std::snprintf(norm_buf, sizeof norm_buf, "%.12f", trace.norm[k]);
    out << "," << norm_buf << "\n";
  }
  for (const auto& [name, value] : footer.extra) out << "# " << name << "=" << fmt(value) << "\n";
  out << "# t_star=" << fmt(footer.t_star) << " fidelity=" << fmt(footer.fidelity) << " phase=" << fmt(footer.phase)
      << "\n";
}

void emit_trace_csv(const TraceResult& trace, const TraceFooter& footer, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  write_trace_csv(trace, footer, file);
  if (!file) throw std::runtime_error("cannot write " + path);
}

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect routing of single excitations in cavity QED networks", "cavity-route"};
  app.require_subcommand(1);

  CommonFlags flags;
  TransferFlags tf;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration")->required();
    sub->add_option("--out", flags.out, "output file (CSV)");
    sub->add_option("--tmax", flags.tmax, "upper end of the transfer-time window");
    sub->add_option("--grid", flags.grid, "grid points for transfer-time scans")->check(CLI::Range(100, 100000000));
    sub->add_option("--samples", flags.samples, "samples per evolution window")->check(CLI::Range(2, 100000000));
    sub->add_flag("--strict", flags.strict, "exit 1 when a numerical check fails");
  };

  std::map<std::string, std::function<int(Session&)>> handlers;
  auto sub = [&](const std::string& name, const std::string& help, std::function<int(Session&)> fn) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd);
    handlers[name] = std::move(fn);
    return cmd;
  };
  sub("blocks", "print invariant block sizes and the off-block residual", [](Session& s) { return s.blocks(); });
  CLI::App* tt = sub("transfer-time", "find the perfect-transfer time of a block",
                     [&tf](Session& s) { return s.transfer_time(tf); });
  tt->add_option("--block", tf.block, "H1, H2, Hmu0 or Hmulambda");
  tt->add_option("--source", tf.source, "1-based source row of the block");
  tt->add_option("--target", tf.target, "1-based target row of the block");
  sub("validate-analytic", "compare closed-form amplitudes with the propagator",
      [](Session& s) { return s.validate_analytic_cmd(); });
  sub("simulate", "route along a diamond chain", [](Session& s) { return s.simulate(); });
  sub("switch", "redirect through a switch vertex", [](Session& s) { return s.switch_cmd(); });
  sub("route", "route along a hex-lattice path", [](Session& s) { return s.route(); });
  sub("entangle", "entanglement transfer with phase compensation", [](Session& s) { return s.entangle(); });

  std::vector<std::string> args(argv.size() > 1 ? argv.rbegin() : argv.rend(), argv.rend() - 1);
  if (argv.empty()) args.clear();
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    Session session(flags, out);
    return handlers.at(name)(session);
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cavityroute
