#pragma once

// Routing programs: windows of free evolution under the full network
// Hamiltonian separated by local phase flips on atoms, which move the
// excitation from one invariant subspace into the next.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cavityroute/network.hpp"
#include "cavityroute/propagator.hpp"
#include "cavityroute/subspaces.hpp"

namespace cavityroute {

struct Evolve {
  double duration = 0.0;
  bool operator==(const Evolve&) const = default;
};

/// Local sigma_z on each listed atom: the excited-atom amplitude changes sign,
/// ground state and vacuum are untouched.
struct PhaseFlip {
  std::vector<SiteId> atom_sites;
  bool operator==(const PhaseFlip&) const = default;
};

/// Multiplies the excited-atom amplitude of one site by exp(i angle).
struct PhaseShift {
  SiteId atom_site = 0;
  double angle = 0.0;
  bool operator==(const PhaseShift&) const = default;
};

using Step = std::variant<Evolve, PhaseFlip, PhaseShift>;

struct ModeRef {
  SiteId site = 0;
  ModeKind kind = ModeKind::atom;

  std::size_t index() const { return kind == ModeKind::cavity ? cavity_index(site) : atom_index(site); }
  bool operator==(const ModeRef&) const = default;
};

struct Schedule {
  std::vector<Step> steps;
  ModeRef source;
  ModeRef target;

  double total_evolution_time() const;
  std::size_t flip_count() const;
  /// Throws std::invalid_argument for negative durations or sites outside the spec.
  void validate(const NetworkSpec& spec) const;
};

/// Population |<v|psi>|^2 of a (possibly collective) mode recorded per sample.
struct Probe {
  std::string label;
  std::vector<std::pair<std::size_t, double>> vector;  ///< (row, coefficient)

  static Probe mode(std::string label, ModeRef mode);
  double population(const ExcitationState& psi) const;
};

struct TraceResult {
  std::vector<double> times;
  std::vector<double> f_photon;
  std::vector<std::string> labels;             ///< one per tracked probe
  std::vector<std::vector<double>> tracked;    ///< tracked[sample][probe]
  std::vector<double> norm;                    ///< |vac|^2 + sum |amps|^2 per sample
  Complex final_amplitude{0.0, 0.0};           ///< amplitude on the target mode
  double final_fidelity = 0.0;
  ExcitationState final_state;

  std::size_t size() const { return times.size(); }
};

ExcitationState local_phase_flip(const ExcitationState& psi, std::span<const SiteId> atom_sites);
ExcitationState local_phase_shift(const ExcitationState& psi, SiteId atom_site, double angle);

/// Evolve(t1), then N-1 times [flip all atoms 3n, Evolve(t2)], then a final
/// flip and Evolve(t1). Source is the atom of site 1, target the atom of site
/// 3N+1 (0-based ids 0 and 3N).
Schedule chain_routing_schedule(int n, double t1, double t2);

/// Flip on the two inner atoms where Hadamard rows `from_port` and `to_port`
/// differ; maps xi_{from}^a onto xi_{to}^a.
PhaseFlip switch_port_flip(const std::array<SiteId, 4>& inner, int from_port, int to_port);

/// Inner atom ids of the switch from build_switch.
std::array<SiteId, 4> switch_inner_sites();

/// Evolve(t), flip 0 -> port, Evolve(t): upload port nu_0 to port nu_j.
Schedule switch_schedule(int port, double t);

/// Upload at path.front(), hop along the path, download at path.back().
/// Both end vertices need an upload port; consecutive vertices must be linked.
Schedule hex_routing_schedule(const HexLatticeDescriptor& desc, const std::vector<int>& path,
                              double t_upload, double t_hop);

/// Runs the schedule under the full network Hamiltonian. Every Evolve window
/// is sampled at `samples_per_window` evenly spaced instants including both
/// ends (a window's first sample repeats the previous window's last instant
/// when a flip sits between them).
TraceResult run_schedule(const NetworkSpec& spec, const Schedule& schedule,
                         const ExcitationState& initial, int samples_per_window,
                         const std::vector<Probe>& probes = {});

/// Same schedule, but each Evolve window propagates every group of
/// `transform` with its closed-form block from extract_block. Only the final
/// state, amplitude and fidelity are filled in.
TraceResult run_schedule_blockwise(const NetworkSpec& spec, const OrthogonalTransform& transform,
                                   const Schedule& schedule, const ExcitationState& initial);

struct EntanglementResult {
  double bell_fidelity = 0.0;          ///< after phase compensation
  double compensation_phase = 0.0;     ///< -arg(u)
  double uncompensated_fidelity = 0.0; ///< |1 + u|^2 / 4
  Complex amplitude{0.0, 0.0};         ///< transfer amplitude u
};

/// Bell fidelity from a transfer amplitude: |1 + u e^{i phi}|^2 / 4.
double bell_fidelity_from_amplitude(Complex u, double compensation_phase);

/// Reference qubit entangled with the source atom,
/// (|0>_R |vac> + |1>_R |source>) / sqrt2, sent through the schedule.
EntanglementResult entanglement_transfer(const NetworkSpec& spec, const Schedule& schedule);

}  // namespace cavityroute
