#include "cavityroute/protocol.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace cavityroute {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_atom(const ExcitationState& psi, SiteId site) {
  if (atom_index(site) >= psi.dim()) {
    throw std::invalid_argument("atom site " + std::to_string(site) + " out of range");
  }
}

}  // namespace

double Schedule::total_evolution_time() const {
  double total = 0.0;
  for (const auto& step : steps) {
    if (const auto* e = std::get_if<Evolve>(&step)) total += e->duration;
  }
  return total;
}

std::size_t Schedule::flip_count() const {
  std::size_t count = 0;
  for (const auto& step : steps) count += std::holds_alternative<PhaseFlip>(step) ? 1 : 0;
  return count;
}

void Schedule::validate(const NetworkSpec& spec) const {
  const std::size_t m = spec.num_sites();
  auto check_site = [m](SiteId s) {
    if (s >= m) throw std::invalid_argument("schedule references site " + std::to_string(s) + " out of range");
  };
  check_site(source.site);
  check_site(target.site);
  for (const auto& step : steps) {
    std::visit(Overloaded{
                   [](const Evolve& e) {
                     if (!(e.duration >= 0.0) || !std::isfinite(e.duration)) {
                       throw std::invalid_argument("evolution durations must be finite and >= 0");
                     }
                   },
                   [&](const PhaseFlip& f) {
                     for (SiteId s : f.atom_sites) check_site(s);
                   },
                   [&](const PhaseShift& p) {
                     check_site(p.atom_site);
                     if (!std::isfinite(p.angle)) throw std::invalid_argument("phase shift angle must be finite");
                   },
               },
               step);
  }
}

Probe Probe::mode(std::string label, ModeRef mode) {
  return Probe{std::move(label), {{mode.index(), 1.0}}};
}

double Probe::population(const ExcitationState& psi) const {
  Complex overlap{0.0, 0.0};
  for (const auto& [row, coeff] : vector) {
    if (row >= psi.dim()) throw std::invalid_argument("probe row out of range");
    overlap += coeff * psi.amps(static_cast<Eigen::Index>(row));
  }
  return std::norm(overlap);
}

ExcitationState local_phase_flip(const ExcitationState& psi, std::span<const SiteId> atom_sites) {
  ExcitationState out = psi;
  for (SiteId s : atom_sites) {
    check_atom(psi, s);
    out.amps(static_cast<Eigen::Index>(atom_index(s))) *= -1.0;
  }
  return out;
}

ExcitationState local_phase_shift(const ExcitationState& psi, SiteId atom_site, double angle) {
  check_atom(psi, atom_site);
  ExcitationState out = psi;
  out.amps(static_cast<Eigen::Index>(atom_index(atom_site))) *= std::polar(1.0, angle);
  return out;
}

Schedule chain_routing_schedule(int n, double t1, double t2) {
  if (n < 1) throw std::invalid_argument("diamond chain needs N >= 1");
  if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) || !std::isfinite(t2)) {
    throw std::invalid_argument("transfer times must be positive");
  }
  PhaseFlip flip;
  for (int k = 1; k <= n; ++k) flip.atom_sites.push_back(static_cast<SiteId>(3 * k - 1));  // site 3k

  Schedule s;
  s.source = {0, ModeKind::atom};
  s.target = {static_cast<SiteId>(3 * n), ModeKind::atom};
  s.steps.push_back(Evolve{t1});
  for (int k = 1; k < n; ++k) {
    s.steps.push_back(flip);
    s.steps.push_back(Evolve{t2});
  }
  s.steps.push_back(flip);
  s.steps.push_back(Evolve{t1});
  return s;
}

PhaseFlip switch_port_flip(const std::array<SiteId, 4>& inner, int from_port, int to_port) {
  if (from_port < 0 || from_port > 3 || to_port < 0 || to_port > 3) {
    throw std::invalid_argument("switch ports are 0..3");
  }
  if (from_port == to_port) throw std::invalid_argument("port flip needs two different ports");
  PhaseFlip flip;
  for (int k = 0; k < 4; ++k) {
    if (hadamard_sign(from_port, k) != hadamard_sign(to_port, k)) flip.atom_sites.push_back(inner[k]);
  }
  return flip;
}

std::array<SiteId, 4> switch_inner_sites() { return {4, 5, 6, 7}; }

Schedule switch_schedule(int port, double t) {
  if (port < 1 || port > 3) {
    throw std::invalid_argument("switch redirection targets port 1, 2 or 3");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("transfer time must be positive");
  Schedule s;
  s.source = {0, ModeKind::atom};
  s.target = {static_cast<SiteId>(port), ModeKind::atom};
  s.steps = {Evolve{t}, switch_port_flip(switch_inner_sites(), 0, port), Evolve{t}};
  return s;
}

Schedule hex_routing_schedule(const HexLatticeDescriptor& desc, const std::vector<int>& path,
                              double t_upload, double t_hop) {
  if (path.size() < 2) throw std::invalid_argument("routing path needs at least two vertices");
  if (!(t_upload > 0.0) || !(t_hop > 0.0)) throw std::invalid_argument("transfer times must be positive");
  const HexLayout layout = hex_layout(desc);
  for (int end : {path.front(), path.back()}) {
    if (!desc.has_upload(end)) {
      throw std::invalid_argument("vertex " + std::to_string(end) + " has no upload port");
    }
  }

  Schedule s;
  const std::size_t first = desc.vertex_position(path.front());
  const std::size_t last = desc.vertex_position(path.back());
  s.source = {layout.slot_site[first][0], ModeKind::atom};
  s.target = {layout.slot_site[last][0], ModeKind::atom};

  s.steps.push_back(Evolve{t_upload});
  int in_port = 0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const int v = path[k];
    const int w = path[k + 1];
    int out_port = -1;
    int next_in = -1;
    for (const auto& link : desc.links) {
      if (link.vertex_a == v && link.vertex_b == w) {
        out_port = link.port_a;
        next_in = link.port_b;
      } else if (link.vertex_a == w && link.vertex_b == v) {
        out_port = link.port_b;
        next_in = link.port_a;
      }
    }
    if (out_port < 0) {
      throw std::invalid_argument("vertices " + std::to_string(v) + " and " + std::to_string(w) +
                                  " are not linked");
    }
    s.steps.push_back(switch_port_flip(layout.inner[desc.vertex_position(v)], in_port, out_port));
    s.steps.push_back(Evolve{t_hop});
    in_port = next_in;
  }
  s.steps.push_back(switch_port_flip(layout.inner[last], in_port, 0));
  s.steps.push_back(Evolve{t_upload});
  return s;
}

TraceResult run_schedule(const NetworkSpec& spec, const Schedule& schedule,
                         const ExcitationState& initial, int samples_per_window,
                         const std::vector<Probe>& probes) {
  schedule.validate(spec);
  if (samples_per_window < 2) throw std::invalid_argument("samples_per_window must be at least 2");
  if (initial.dim() != spec.dim()) throw std::invalid_argument("initial state does not match the network");

  const Spectrum spectrum = eigendecompose(build_single_excitation_hamiltonian(spec));
  TraceResult trace;
  for (const auto& p : probes) trace.labels.push_back(p.label);

  auto record = [&](double t, const ExcitationState& psi) {
    trace.times.push_back(t);
    trace.f_photon.push_back(photon_population(psi));
    std::vector<double> row;
    row.reserve(probes.size());
    for (const auto& p : probes) row.push_back(p.population(psi));
    trace.tracked.push_back(std::move(row));
    trace.norm.push_back(psi.norm_squared());
  };

  ExcitationState psi = initial;
  double clock = 0.0;
  bool sampled = false;
  for (const auto& step : schedule.steps) {
    std::visit(Overloaded{
                   [&](const Evolve& e) {
                     const ExcitationState start = psi;
                     for (int k = 0; k < samples_per_window; ++k) {
                       const double dt = e.duration * k / (samples_per_window - 1);
                       psi = propagate(spectrum, start, dt);
                       record(clock + dt, psi);
                     }
                     clock += e.duration;
                     sampled = true;
                   },
                   [&](const PhaseFlip& f) { psi = local_phase_flip(psi, f.atom_sites); },
                   [&](const PhaseShift& p) { psi = local_phase_shift(psi, p.atom_site, p.angle); },
               },
               step);
  }
  if (!sampled) record(clock, psi);

  trace.final_amplitude = psi.amps(static_cast<Eigen::Index>(schedule.target.index()));
  trace.final_fidelity = std::norm(trace.final_amplitude);
  trace.final_state = std::move(psi);
  return trace;
}

TraceResult run_schedule_blockwise(const NetworkSpec& spec, const OrthogonalTransform& transform,
                                   const Schedule& schedule, const ExcitationState& initial) {
  schedule.validate(spec);
  if (initial.dim() != spec.dim() || transform.dim() != spec.dim()) {
    throw std::invalid_argument("state, transform and network dimensions disagree");
  }

  std::vector<bool> covered(transform.dim(), false);
  std::map<std::string, std::size_t> cache;
  std::vector<std::size_t> spectrum_of_group;
  std::vector<Spectrum> unique;
  for (const auto& group : transform.groups) {
    const std::string key = group.origin.name();
    auto it = cache.find(key);
    if (it == cache.end()) {
      const BlockHamiltonian block = extract_block(spec, group.origin);
      unique.push_back(eigendecompose(block.matrix));
      it = cache.emplace(key, unique.size() - 1).first;
    }
    if (unique[it->second].dim() != group.members.size()) {
      throw std::invalid_argument("block " + key + " does not match its basis group");
    }
    spectrum_of_group.push_back(it->second);
    for (std::size_t r : group.members) covered[r] = true;
  }
  for (bool c : covered) {
    if (!c) throw std::invalid_argument("transform groups do not cover the whole basis");
  }

  const Eigen::MatrixXcd basis = transform.basis.cast<Complex>();
  ExcitationState psi = initial;
  for (const auto& step : schedule.steps) {
    std::visit(Overloaded{
                   [&](const Evolve& e) {
                     ComplexVector y = basis * psi.amps;
                     for (std::size_t g = 0; g < transform.groups.size(); ++g) {
                       const auto& members = transform.groups[g].members;
                       ComplexVector part(static_cast<Eigen::Index>(members.size()));
                       for (std::size_t a = 0; a < members.size(); ++a) {
                         part(static_cast<Eigen::Index>(a)) = y(static_cast<Eigen::Index>(members[a]));
                       }
                       part = propagate(unique[spectrum_of_group[g]], part, e.duration);
                       for (std::size_t a = 0; a < members.size(); ++a) {
                         y(static_cast<Eigen::Index>(members[a])) = part(static_cast<Eigen::Index>(a));
                       }
                     }
                     psi.amps = basis.transpose() * y;
                   },
                   [&](const PhaseFlip& f) { psi = local_phase_flip(psi, f.atom_sites); },
                   [&](const PhaseShift& p) { psi = local_phase_shift(psi, p.atom_site, p.angle); },
               },
               step);
  }

  TraceResult trace;
  trace.final_amplitude = psi.amps(static_cast<Eigen::Index>(schedule.target.index()));
  trace.final_fidelity = std::norm(trace.final_amplitude);
  trace.final_state = std::move(psi);
  return trace;
}

double bell_fidelity_from_amplitude(Complex u, double compensation_phase) {
  return std::norm(1.0 + u * std::polar(1.0, compensation_phase)) / 4.0;
}

EntanglementResult entanglement_transfer(const NetworkSpec& spec, const Schedule& schedule) {
  const ExcitationState excited = ExcitationState::basis(spec.dim(), schedule.source.index());
  const TraceResult trace = run_schedule(spec, schedule, excited, 2);

  EntanglementResult out;
  out.amplitude = trace.final_amplitude;
  out.compensation_phase = -std::arg(out.amplitude);

  // |1>_R branch after compensation; the |0>_R branch stays in the vacuum with
  // amplitude 1, so the overlap with the ideal Bell state is (1 + <target|psi>) / 2.
  const ExcitationState shifted =
      local_phase_shift(trace.final_state, schedule.target.site, out.compensation_phase);
  const Complex branch = shifted.amps(static_cast<Eigen::Index>(schedule.target.index()));
  out.bell_fidelity = std::norm((1.0 + branch) / 2.0);
  out.uncompensated_fidelity = bell_fidelity_from_amplitude(out.amplitude, 0.0);
  return out;
}

}  // namespace cavityroute
