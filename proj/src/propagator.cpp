#include "cavityroute/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

namespace cavityroute {

ExcitationState ExcitationState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw std::invalid_argument("basis index out of range");
  ExcitationState psi;
  psi.amps = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  psi.amps(static_cast<Eigen::Index>(index)) = 1.0;
  return psi;
}

ExcitationState ExcitationState::qubit(std::size_t dim, std::size_t index, Complex alpha,
                                       Complex beta) {
  ExcitationState psi = basis(dim, index);
  psi.vac = alpha;
  psi.amps(static_cast<Eigen::Index>(index)) = beta;
  return psi;
}

Spectrum::Spectrum(RealVector eigenvalues, RealMatrix eigenvectors)
    : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
  if (eigenvectors_.rows() != eigenvectors_.cols() || eigenvectors_.rows() != eigenvalues_.size()) {
    throw std::invalid_argument("spectrum dimensions disagree");
  }
}

Complex Spectrum::amplitude(std::size_t source, std::size_t target, double t) const {
  if (source >= dim() || target >= dim()) throw std::invalid_argument("basis index out of range");
  const auto s = static_cast<Eigen::Index>(source);
  const auto r = static_cast<Eigen::Index>(target);
  Complex sum{0.0, 0.0};
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    sum += eigenvectors_(r, k) * eigenvectors_(s, k) * std::polar(1.0, -eigenvalues_(k) * t);
  }
  return sum;
}

Spectrum eigendecompose(const RealMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("Hamiltonian must be square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("Hamiltonian must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return Spectrum(solver.eigenvalues(), solver.eigenvectors());
}

ComplexVector propagate(const Spectrum& s, const ComplexVector& amps, double t) {
  if (static_cast<std::size_t>(amps.size()) != s.dim()) {
    throw std::invalid_argument("state and Hamiltonian dimensions disagree");
  }
  const RealMatrix& v = s.eigenvectors();
  ComplexVector coeffs = v.transpose().cast<Complex>() * amps;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -s.eigenvalues()(k) * t);
  }
  return v.cast<Complex>() * coeffs;
}

ExcitationState propagate(const Spectrum& s, const ExcitationState& psi, double t) {
  return ExcitationState{psi.vac, propagate(s, psi.amps, t)};
}

double photon_population(const ExcitationState& psi) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < psi.amps.size(); r += 2) total += std::norm(psi.amps(r));
  return total;
}

double photon_population(const ExcitationState& psi, const NetworkSpec& spec) {
  if (psi.dim() != spec.dim()) throw std::invalid_argument("state does not match the network");
  return photon_population(psi);
}

double site_population(const ExcitationState& psi, SiteId site, ModeKind kind) {
  const std::size_t index = kind == ModeKind::cavity ? cavity_index(site) : atom_index(site);
  if (index >= psi.dim()) throw std::invalid_argument("site " + std::to_string(site) + " out of range");
  return std::norm(psi.amps(static_cast<Eigen::Index>(index)));
}

unsigned scan_thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CAVITY_ROUTE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

class FidelityProbe {
 public:
  FidelityProbe(const Spectrum& s, std::size_t source, std::size_t target)
      : energies_(s.eigenvalues()) {
    if (source >= s.dim() || target >= s.dim()) {
      throw std::invalid_argument("source/target index out of range");
    }
    weights_ = s.eigenvectors().row(static_cast<Eigen::Index>(target)).transpose().cwiseProduct(
        s.eigenvectors().row(static_cast<Eigen::Index>(source)).transpose());
  }

  Complex amplitude(double t) const {
    Complex sum{0.0, 0.0};
    for (Eigen::Index k = 0; k < energies_.size(); ++k) {
      sum += weights_(k) * std::polar(1.0, -energies_(k) * t);
    }
    return sum;
  }
  double fidelity(double t) const { return std::norm(amplitude(t)); }

 private:
  RealVector energies_;
  RealVector weights_;
};

struct Peak {
  double t;
  double fidelity;
};

Peak golden_section_max(const FidelityProbe& probe, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = probe.fidelity(c);
  double fd = probe.fidelity(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = probe.fidelity(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = probe.fidelity(d);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, probe.fidelity(t)};
}

}  // namespace

TransferTime find_transfer_time(const Spectrum& s, std::size_t source, std::size_t target,
                                const TransferSearch& search) {
  if (!(search.t_lo < search.t_hi) || !std::isfinite(search.t_lo) || !std::isfinite(search.t_hi)) {
    throw std::invalid_argument("transfer-time window is empty");
  }
  if (search.grid_points < 100) throw std::invalid_argument("grid_points must be at least 100");
  if (!(search.refine_tol > 0.0)) throw std::invalid_argument("refine_tol must be positive");

  const FidelityProbe probe(s, source, target);
  const std::size_t n = static_cast<std::size_t>(search.grid_points);
  const double step = (search.t_hi - search.t_lo) / static_cast<double>(n - 1);
  auto grid_time = [&](std::size_t i) {
    return i + 1 == n ? search.t_hi : search.t_lo + step * static_cast<double>(i);
  };

  // Each grid point is computed independently, so the split across threads
  // cannot change the values.
  std::vector<double> f(n);
  const unsigned threads = std::min<unsigned>(scan_thread_count(), static_cast<unsigned>(n / 64 + 1));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        for (std::size_t i = begin; i < end; ++i) f[i] = probe.fidelity(grid_time(i));
      });
    }
  }

  // The grid undersamples the fast Rabi ripple, so screen loosely and decide
  // on refined values.
  const double grid_max = *std::max_element(f.begin(), f.end());
  std::vector<Peak> refined;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || f[i] >= f[i - 1];
    const bool right_ok = i + 1 == n || f[i] >= f[i + 1];
    if (!left_ok || !right_ok || f[i] < grid_max - 1e-2) continue;
    const double lo = std::max(search.t_lo, grid_time(i) - step);
    const double hi = std::min(search.t_hi, grid_time(i) + step);
    Peak p = golden_section_max(probe, lo, hi, search.refine_tol);
    if (f[i] > p.fidelity) p = {grid_time(i), f[i]};
    refined.push_back(p);
  }

  double best = 0.0;
  for (const auto& p : refined) best = std::max(best, p.fidelity);
  std::vector<Peak> accepted;
  for (const auto& p : refined) {
    if (p.fidelity >= best - search.accept_tol) accepted.push_back(p);
  }

  const double gap = search.cluster_gap > 0.0 ? search.cluster_gap : 0.05 * (search.t_hi - search.t_lo);
  Peak chosen = accepted.front();
  for (std::size_t k = 1; k < accepted.size(); ++k) {
    if (accepted[k].t - accepted[k - 1].t > gap) break;
    if (accepted[k].fidelity > chosen.fidelity) chosen = accepted[k];
  }

  TransferTime out;
  out.t_star = chosen.t;
  const Complex u = probe.amplitude(chosen.t);
  out.fidelity = std::norm(u);
  out.phase = std::arg(u);
  return out;
}

TransferTime find_transfer_time(const RealMatrix& h, std::size_t source, std::size_t target,
                                const TransferSearch& search) {
  return find_transfer_time(eigendecompose(h), source, target, search);
}

}  // namespace cavityroute
