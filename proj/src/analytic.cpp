#include "cavityroute/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cavityroute/subspaces.hpp"

namespace cavityroute {

namespace {

Complex phase(double energy, double t) { return std::polar(1.0, -energy * t); }

}  // namespace

AnalyticConstants AnalyticConstants::compute(const SystemParams& params, double coupling) {
  const double d = params.delta;
  const double g2 = 4.0 * params.g * params.g;
  const double k = coupling;
  const double e = std::sqrt(2.0) * coupling;
  AnalyticConstants c;
  c.a = std::sqrt(k * k + 2.0 * k * d + d * d + g2);
  c.b = std::sqrt(k * k - 2.0 * k * d + d * d + g2);
  c.c1 = std::sqrt(d * d + g2);
  c.c2 = std::sqrt(g2 + (e + d) * (e + d));
  c.c3 = std::sqrt(g2 + (e - d) * (e - d));
  return c;
}

AnalyticConstants AnalyticConstants::compute(const SystemParams& params) {
  return compute(params, std::sqrt(2.0) * params.j);
}

// Two cells coupled by k split into the symmetric (cavity energy shifted by
// +k) and antisymmetric (-k) Jaynes-Cummings doublets. Energies:
//   s+ = Oc + (k + A - D)/2    s- = Oc + (k - A - D)/2
//   d+ = Oc - (k - B + D)/2    d- = Oc - (k + B + D)/2
AmplitudeSet analytic_u4(const SystemParams& params, double coupling, double t) {
  const double oc = params.omega_c;
  const double dl = params.delta;
  const double g = params.g;
  const double k = coupling;
  const auto c = AnalyticConstants::compute(params, coupling);
  const double a = c.a;
  const double b = c.b;

  const Complex sp = phase(oc + (k + a - dl) / 2.0, t);
  const Complex sm = phase(oc + (k - a - dl) / 2.0, t);
  const Complex dp = phase(oc - (k - b + dl) / 2.0, t);
  const Complex dm = phase(oc - (k + b + dl) / 2.0, t);

  const double p = (a * a - (k + dl) * (k + dl)) / (8.0 * a * g);
  const double q = (b * b - (k - dl) * (k - dl)) / (8.0 * b * g);
  const double s_hi = (a - k - dl) / (4.0 * a);
  const double s_lo = (a + k + dl) / (4.0 * a);
  const double d_hi = (b + k - dl) / (4.0 * b);
  const double d_lo = (b - k + dl) / (4.0 * b);

  AmplitudeSet u(4);
  u(0) = p * sp - p * sm + q * dp - q * dm;                   // c_1
  u(1) = s_hi * sp + s_lo * sm + d_hi * dp + d_lo * dm;       // a_1 (source)
  u(2) = p * sp - p * sm - q * dp + q * dm;                   // c_2
  u(3) = s_hi * sp + s_lo * sm - d_hi * dp - d_lo * dm;       // a_2 (target)
  return u;
}

// Three cells in a line have collective modes (1,0,-1)/sqrt2 and
// (1,+-sqrt2,1)/2 with cavity shifts 0 and +-e, e = sqrt(2) k. Each mode is a
// Jaynes-Cummings doublet with splitting C1 (shift 0), C2 (+e) or C3 (-e).
AmplitudeSet analytic_u6(const SystemParams& params, double coupling, double t) {
  const double oc = params.omega_c;
  const double dl = params.delta;
  const double g = params.g;
  const double e = std::sqrt(2.0) * coupling;
  const double h = e / 2.0;  // equals J on the chain, sqrt(2) J on the lattice
  const auto c = AnalyticConstants::compute(params, coupling);
  const double c1 = c.c1;
  const double c2 = c.c2;
  const double c3 = c.c3;
  const double r2 = std::sqrt(2.0);

  const Complex z_lo = phase(oc - (c1 + dl) / 2.0, t);
  const Complex z_hi = phase(oc + (c1 - dl) / 2.0, t);
  const Complex p_lo = phase(oc + h - (c2 + dl) / 2.0, t);
  const Complex p_hi = phase(oc + h + (c2 - dl) / 2.0, t);
  const Complex m_lo = phase(oc - h - (c3 + dl) / 2.0, t);
  const Complex m_hi = phase(oc - h + (c3 - dl) / 2.0, t);

  // Cavity coefficients G/C in the (C^2 - x^2)/(8 G C) form.
  const double fz = (c1 * c1 - dl * dl) / (8.0 * g * c1);
  const double fp = (c2 * c2 - (e + dl) * (e + dl)) / (16.0 * g * c2);
  const double fm = (c3 * c3 - (e - dl) * (e - dl)) / (16.0 * g * c3);
  const double fp_mid = (c2 * c2 - (e + dl) * (e + dl)) / (8.0 * r2 * c2 * g);
  const double fm_mid = (c3 * c3 - (e - dl) * (e - dl)) / (8.0 * r2 * c3 * g);

  // Atom coefficients.
  const double az_lo = (c1 + dl) / (4.0 * c1);
  const double az_hi = (c1 - dl) / (4.0 * c1);
  const double ap_lo = (c2 + e + dl) / (8.0 * c2);
  const double ap_hi = (c2 - e - dl) / (8.0 * c2);
  const double am_lo = (c3 - e + dl) / (8.0 * c3);
  const double am_hi = (c3 + e - dl) / (8.0 * c3);
  const double ap_lo_mid = (c2 + e + dl) / (4.0 * r2 * c2);
  const double ap_hi_mid = (c2 - e - dl) / (4.0 * r2 * c2);
  const double am_lo_mid = (c3 - e + dl) / (4.0 * r2 * c3);
  const double am_hi_mid = (c3 + e - dl) / (4.0 * r2 * c3);

  const Complex outer_cavity = -fp * p_lo + fp * p_hi - fm * m_lo + fm * m_hi;
  const Complex outer_atom = ap_lo * p_lo + ap_hi * p_hi + am_lo * m_lo + am_hi * m_hi;

  AmplitudeSet u(6);
  u(0) = -fz * z_lo + fz * z_hi + outer_cavity;                            // c_1
  u(1) = az_lo * z_lo + az_hi * z_hi + outer_atom;                         // a_1 (source)
  u(2) = -fp_mid * p_lo + fp_mid * p_hi + fm_mid * m_lo - fm_mid * m_hi;   // c_2
  u(3) = ap_lo_mid * p_lo + ap_hi_mid * p_hi - am_lo_mid * m_lo - am_hi_mid * m_hi;  // a_2
  u(4) = fz * z_lo - fz * z_hi + outer_cavity;                             // c_3
  u(5) = -az_lo * z_lo - az_hi * z_hi + outer_atom;                        // a_3 (target)
  return u;
}

const char* to_string(AnalyticBlock block) {
  switch (block) {
    case AnalyticBlock::chain_end: return "H1";
    case AnalyticBlock::chain_bulk: return "H2";
    case AnalyticBlock::switch_port: return "Hmu0";
    case AnalyticBlock::lattice_hop: return "Hmulambda";
  }
  return "H1";
}

AnalyticBlock analytic_block_from_string(const std::string& text) {
  if (text == "H1") return AnalyticBlock::chain_end;
  if (text == "H2") return AnalyticBlock::chain_bulk;
  if (text == "Hmu0") return AnalyticBlock::switch_port;
  if (text == "Hmulambda") return AnalyticBlock::lattice_hop;
  throw std::invalid_argument("unknown block '" + text + "' (expected H1, H2, Hmu0 or Hmulambda)");
}

int analytic_block_cells(AnalyticBlock block) {
  return (block == AnalyticBlock::chain_end || block == AnalyticBlock::switch_port) ? 2 : 3;
}

double analytic_block_coupling(AnalyticBlock block, const SystemParams& params) {
  const bool chain = block == AnalyticBlock::chain_end || block == AnalyticBlock::chain_bulk;
  return chain ? std::sqrt(2.0) * params.j : 2.0 * params.j;
}

AmplitudeSet analytic_amplitudes(AnalyticBlock block, const SystemParams& params, double t) {
  const double k = analytic_block_coupling(block, params);
  return analytic_block_cells(block) == 2 ? analytic_u4(params, k, t) : analytic_u6(params, k, t);
}

double validate_amplitudes(const SystemParams& params, AnalyticBlock block,
                           std::span<const double> grid,
                           const std::function<AmplitudeSet(double)>& candidate) {
  if (grid.empty()) throw std::invalid_argument("validation grid is empty");
  params.validate();
  const RealMatrix h =
      cell_line_matrix(params, analytic_block_cells(block), analytic_block_coupling(block, params));
  const Spectrum s = eigendecompose(h);
  const ExcitationState source = ExcitationState::basis(static_cast<std::size_t>(h.rows()), 1);

  double worst = 0.0;
  for (double t : grid) {
    const ComplexVector numeric = propagate(s, source.amps, t);
    const AmplitudeSet closed = candidate(t);
    if (closed.size() != numeric.size()) {
      throw std::invalid_argument("candidate amplitude set has the wrong length");
    }
    worst = std::max(worst, (closed - numeric).cwiseAbs().maxCoeff());
  }
  return worst;
}

double validate_analytic(const SystemParams& params, AnalyticBlock block,
                         std::span<const double> grid) {
  return validate_amplitudes(params, block, grid,
                             [&](double t) { return analytic_amplitudes(block, params, t); });
}

}  // namespace cavityroute
