#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cavityroute/analytic.hpp"
#include "cavityroute/cli.hpp"
#include "cavityroute/network.hpp"
#include "cavityroute/propagator.hpp"
#include "cavityroute/protocol.hpp"
#include "cavityroute/serialization.hpp"
#include "cavityroute/subspaces.hpp"

namespace py = pybind11;
using namespace cavityroute;

namespace {

HexLatticeDescriptor make_lattice(const std::vector<int>& vertices,
                                  const std::vector<std::array<int, 4>>& links,
                                  const std::vector<int>& uploads) {
  HexLatticeDescriptor d;
  d.vertices = vertices;
  for (const auto& l : links) d.links.push_back({l[0], l[1], l[2], l[3]});
  d.uploads = uploads;
  d.validate();
  return d;
}

py::dict trace_to_dict(const TraceResult& t) {
  py::dict d;
  d["times"] = t.times;
  d["F"] = t.f_photon;
  d["labels"] = t.labels;
  d["tracked"] = t.tracked;
  d["norm"] = t.norm;
  d["final_amplitude"] = t.final_amplitude;
  d["final_fidelity"] = t.final_fidelity;
  d["final_vac"] = t.final_state.vac;
  d["final_amps"] = t.final_state.amps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cavityroute, m) {
  m.doc() = "Perfect routing of single excitations in cavity QED networks";

  py::register_exception<std::invalid_argument>(m, "ConfigError", PyExc_ValueError);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double omega_c, double delta, double g, double j) {
             SystemParams p{omega_c, delta, g, j};
             p.validate();
             return p;
           }),
           py::arg("omega_c") = 1.0, py::arg("delta") = 0.0, py::arg("g") = 65.0, py::arg("j") = 1.0)
      .def_readwrite("omega_c", &SystemParams::omega_c)
      .def_readwrite("delta", &SystemParams::delta)
      .def_readwrite("g", &SystemParams::g)
      .def_readwrite("j", &SystemParams::j)
      .def_property_readonly("omega_a", &SystemParams::omega_a)
      .def("__repr__", [](const SystemParams& p) {
        std::ostringstream os;
        os << "SystemParams(omega_c=" << p.omega_c << ", delta=" << p.delta << ", g=" << p.g << ", j=" << p.j << ")";
        return os.str();
      });

  py::class_<NetworkSpec>(m, "NetworkSpec")
      .def_property_readonly("num_sites", &NetworkSpec::num_sites)
      .def_property_readonly("dim", &NetworkSpec::dim)
      .def_property_readonly("labels",
                             [](const NetworkSpec& s) {
                               std::vector<std::string> out;
                               for (const auto& site : s.sites) out.push_back(site.label);
                               return out;
                             })
      .def_property_readonly("edges",
                             [](const NetworkSpec& s) {
                               std::vector<std::tuple<SiteId, SiteId, int>> out;
                               for (const auto& e : s.edges) out.emplace_back(e.k, e.l, e.sign);
                               return out;
                             })
      .def_readonly("params", &NetworkSpec::params)
      .def("hamiltonian", &build_single_excitation_hamiltonian)
      .def("to_json", [](const NetworkSpec& s) { return network_to_json_string(s); })
      .def_static("from_json", &network_from_json_string);

  m.def("build_diamond_chain", &build_diamond_chain, py::arg("n"), py::arg("params") = SystemParams{});
  m.def("build_switch", &build_switch, py::arg("params") = SystemParams{});
  m.def(
      "build_hex_lattice",
      [](const std::vector<int>& vertices, const std::vector<std::array<int, 4>>& links,
         const std::vector<int>& uploads, const SystemParams& params) {
        return build_hex_lattice(make_lattice(vertices, links, uploads), params);
      },
      py::arg("vertices"), py::arg("links"), py::arg("uploads") = std::vector<int>{},
      py::arg("params") = SystemParams{});

  py::class_<OrthogonalTransform>(m, "OrthogonalTransform")
      .def_readonly("basis", &OrthogonalTransform::basis)
      .def_readonly("labels", &OrthogonalTransform::labels)
      .def_property_readonly("dim", &OrthogonalTransform::dim);

  m.def("chain_collective_basis", &chain_collective_basis, py::arg("n"));
  m.def(
      "switch_collective_basis",
      [](const NetworkSpec& spec) {
        const auto inner = switch_inner_sites();
        return switch_collective_basis(spec, inner);
      },
      py::arg("spec"));
  m.def(
      "lattice_collective_basis",
      [](const NetworkSpec& spec, const std::vector<int>& vertices, const std::vector<std::array<int, 4>>& links,
         const std::vector<int>& uploads) {
        const HexLayout layout = hex_layout(make_lattice(vertices, links, uploads));
        return lattice_collective_basis(spec, layout.inner);
      },
      py::arg("spec"), py::arg("vertices"), py::arg("links"), py::arg("uploads") = std::vector<int>{});
  m.def(
      "block_decompose",
      [](const RealMatrix& h, const OrthogonalTransform& t) {
        const BlockDecomposition dec = block_decompose(h, t);
        py::list blocks;
        for (const auto& b : dec.blocks) {
          py::dict d;
          d["name"] = b.origin.name();
          d["matrix"] = b.matrix;
          d["labels"] = b.basis_labels;
          blocks.append(d);
        }
        return py::make_tuple(blocks, dec.residual);
      },
      py::arg("h"), py::arg("transform"), "Returns (blocks, residual).");
  m.def("cell_line_matrix", &cell_line_matrix, py::arg("params"), py::arg("cells"), py::arg("coupling"));

  m.def(
      "propagate",
      [](const RealMatrix& h, const ComplexVector& amps, double t) { return propagate(eigendecompose(h), amps, t); },
      py::arg("h"), py::arg("amps"), py::arg("t"));

  py::class_<TransferTime>(m, "TransferTime")
      .def_readonly("t_star", &TransferTime::t_star)
      .def_readonly("fidelity", &TransferTime::fidelity)
      .def_readonly("phase", &TransferTime::phase)
      .def("__repr__", [](const TransferTime& t) {
        std::ostringstream os;
        os.precision(12);
        os << "TransferTime(t_star=" << t.t_star << ", fidelity=" << t.fidelity << ", phase=" << t.phase << ")";
        return os.str();
      });
  m.def(
      "find_transfer_time",
      [](const RealMatrix& h, std::size_t source, std::size_t target, double t_lo, double t_hi, int grid_points) {
        TransferSearch s;
        s.t_lo = t_lo;
        s.t_hi = t_hi;
        s.grid_points = grid_points;
        py::gil_scoped_release release;
        return find_transfer_time(h, source, target, s);
      },
      py::arg("h"), py::arg("source"), py::arg("target"), py::arg("t_lo") = 0.0, py::arg("t_hi") = 10.0,
      py::arg("grid_points") = 20001);

  m.def(
      "analytic_amplitudes",
      [](const std::string& block, const SystemParams& params, double t) {
        return analytic_amplitudes(analytic_block_from_string(block), params, t);
      },
      py::arg("block"), py::arg("params"), py::arg("t"));
  m.def(
      "validate_analytic",
      [](const std::string& block, const SystemParams& params, const std::vector<double>& grid) {
        return validate_analytic(params, analytic_block_from_string(block), grid);
      },
      py::arg("block"), py::arg("params"), py::arg("grid"));

  py::class_<Schedule>(m, "Schedule")
      .def_property_readonly("total_evolution_time", &Schedule::total_evolution_time)
      .def_property_readonly("flip_count", &Schedule::flip_count)
      .def_property_readonly("source_site", [](const Schedule& s) { return s.source.site; })
      .def_property_readonly("target_site", [](const Schedule& s) { return s.target.site; });
  m.def("chain_routing_schedule", &chain_routing_schedule, py::arg("n"), py::arg("t1"), py::arg("t2"));
  m.def("switch_schedule", &switch_schedule, py::arg("port"), py::arg("t"));
  m.def(
      "hex_routing_schedule",
      [](const std::vector<int>& vertices, const std::vector<std::array<int, 4>>& links,
         const std::vector<int>& uploads, const std::vector<int>& path, double t_upload, double t_hop) {
        return hex_routing_schedule(make_lattice(vertices, links, uploads), path, t_upload, t_hop);
      },
      py::arg("vertices"), py::arg("links"), py::arg("uploads"), py::arg("path"), py::arg("t_upload"),
      py::arg("t_hop"));

  m.def(
      "run_schedule",
      [](const NetworkSpec& spec, const Schedule& schedule, std::complex<double> alpha, std::complex<double> beta,
         int samples_per_window) {
        const auto init = ExcitationState::qubit(spec.dim(), schedule.source.index(), alpha, beta);
        return trace_to_dict(run_schedule(spec, schedule, init, samples_per_window));
      },
      py::arg("spec"), py::arg("schedule"), py::arg("alpha") = std::complex<double>(0.0, 0.0),
      py::arg("beta") = std::complex<double>(1.0, 0.0), py::arg("samples_per_window") = 200);

  m.def(
      "entanglement_transfer",
      [](const NetworkSpec& spec, const Schedule& schedule) {
        const EntanglementResult r = entanglement_transfer(spec, schedule);
        py::dict d;
        d["bell_fidelity"] = r.bell_fidelity;
        d["compensation_phase"] = r.compensation_phase;
        d["uncompensated_fidelity"] = r.uncompensated_fidelity;
        d["amplitude"] = r.amplitude;
        return d;
      },
      py::arg("spec"), py::arg("schedule"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "cavity-route");
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_command(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one cavity-route invocation; returns (exit_code, stdout, stderr).");
}
