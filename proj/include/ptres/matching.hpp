#pragma once

// Matching conditions at the origin, plane-wave transmission through the
// bare point interaction, and wave functions from Green's-function residues.
//
// For b != +-1/(2 zeta) the conditions read
//   (1 - 2b zeta) psi(0+)  = (1 + 2b eta) psi(0-)
//   (1 + 2b zeta) psi'(0+) = (1 - 2b eta) psi'(0-) + 2a (zeta psi(0+) + eta psi(0-)),
// which solve to a lower-triangular matrix acting on (psi(0-), psi'(0-)).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "ptres/error.hpp"
#include "ptres/greens.hpp"
#include "ptres/resonance.hpp"
#include "ptres/types.hpp"

namespace ptres {

enum class SingularCase { b_plus, b_minus };

struct MatchingMatrix {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  std::optional<SingularCase> singular_case;

  double det() const { return m11 * m22 - m12 * m21; }
};

/// Value and derivative on one side of the origin.
struct BoundaryPair {
  cplx psi = 0.0;
  cplx psip = 0.0;
};

inline constexpr double singular_b_tolerance = 1e-13;

/// Which singular value b sits on, if any: +1/(2 zeta) or -1/(2 zeta).
inline std::optional<SingularCase> singular_case_of(const PointInteraction& pint) {
  const double bz = 2.0 * pint.b() * pint.zeta();
  if (std::abs(1.0 - bz) < singular_b_tolerance) return SingularCase::b_plus;
  if (std::abs(1.0 + bz) < singular_b_tolerance) return SingularCase::b_minus;
  return std::nullopt;
}

inline MatchingMatrix matching_matrix(const PointInteraction& pint) {
  if (singular_case_of(pint))
    throw numeric_error(errc::singular_b, "b = +-1/(2 zeta): use singular_case_conditions");
  const double a = pint.a(), b = pint.b(), ze = pint.zeta(), et = pint.eta();
  MatchingMatrix m;
  m.m11 = (1.0 + 2.0 * b * et) / (1.0 - 2.0 * b * ze);
  m.m21 = 2.0 * a / ((1.0 - 2.0 * b * ze) * (1.0 + 2.0 * b * ze));
  m.m22 = (1.0 - 2.0 * b * et) / (1.0 + 2.0 * b * ze);
  return m;
}

/// The symmetric-weight matrix of the self-adjoint extension construction.
inline MatchingMatrix kurasov_matrix(double a, double b) {
  if (std::abs(1.0 - b) < singular_b_tolerance || std::abs(1.0 + b) < singular_b_tolerance)
    throw numeric_error(errc::singular_b, "b = +-1");
  MatchingMatrix m;
  m.m11 = (1.0 + b) / (1.0 - b);
  m.m21 = 2.0 * a / (1.0 - b * b);
  m.m22 = (1.0 - b) / (1.0 + b);
  return m;
}

/// The two linear relations that replace the matrix at b = +-1/(2 zeta).
///
/// At zeta = 1/2 they reduce to
///   b = +1:  psi(0-) = 0,  psi'(0+) = +(a/2) psi(0+)
///   b = -1:  psi(0+) = 0,  psi'(0-) = -(a/2) psi(0-)
/// so the two half-lines decouple.
class SingularConstraints {
 public:
  explicit SingularConstraints(const PointInteraction& pint) : pint_(pint) {
    const auto c = singular_case_of(pint);
    if (!c) throw numeric_error(errc::not_singular_case, "b is not +-1/(2 zeta)");
    case_ = *c;
  }

  SingularCase which() const { return case_; }

  /// Residuals of the two relations, scaled so that at zeta = 1/2 they read
  /// exactly as in the comment above (coefficient 1 on the constrained value).
  std::array<cplx, 2> residuals(const BoundaryPair& minus, const BoundaryPair& plus) const {
    const double a = pint_.a(), b = pint_.b(), ze = pint_.zeta(), et = pint_.eta();
    const cplx r1 = (1.0 - 2.0 * b * ze) * plus.psi - (1.0 + 2.0 * b * et) * minus.psi;
    const cplx r2 = (1.0 + 2.0 * b * ze) * plus.psip - (1.0 - 2.0 * b * et) * minus.psip -
                    2.0 * a * (ze * plus.psi + et * minus.psi);
    if (case_ == SingularCase::b_plus) return {-r1 / (1.0 + 2.0 * b * et), r2 / (1.0 + 2.0 * b * ze)};
    return {r1 / (1.0 - 2.0 * b * ze), -r2 / (1.0 - 2.0 * b * et)};
  }

  bool satisfied(const BoundaryPair& minus, const BoundaryPair& plus, double tol = 1e-10) const {
    const auto r = residuals(minus, plus);
    const double scale = std::max({1.0, std::abs(minus.psi), std::abs(minus.psip), std::abs(plus.psi), std::abs(plus.psip)});
    return std::abs(r[0]) <= tol * scale && std::abs(r[1]) <= tol * scale;
  }

 private:
  PointInteraction pint_;
  SingularCase case_;
};

inline SingularConstraints singular_case_conditions(const PointInteraction& pint) { return SingularConstraints(pint); }

struct Transmission {
  double T = 0.0, R = 0.0;
  cplx t, r;
};

/// Scattering of e^{ikx} from the left by the point interaction alone:
/// psi = e^{ikx} + r e^{-ikx} (x < 0), t e^{ikx} (x > 0).
inline Transmission transmission(double k, const PointInteraction& pint) {
  if (!(k > 0.0) || !std::isfinite(k)) throw numeric_error(errc::invalid_argument, "transmission needs real k > 0");
  const MatchingMatrix m = matching_matrix(pint);
  const cplx ik = I * k;
  const cplx den = ik * (m.m11 + m.m22) - m.m21;
  Transmission out;
  out.r = (ik * (m.m22 - m.m11) + m.m21) / den;
  out.t = 2.0 * ik * m.m11 * m.m22 / den;
  out.T = std::norm(out.t);
  out.R = std::norm(out.r);
  return out;
}

// ---------------------------------------------------------- residues

struct ResidueOptions {
  /// Radius of the circle around the pole in the k-plane.
  double radius = 1e-2;
  /// Source points tried in order; the first that is not a node is used.
  std::vector<double> probes{-0.5, -1.0, 0.5, 1.0};
  /// Agreement required between successive Richardson levels and between probes.
  double tol = 1e-7;
};

struct ResidueWave {
  std::vector<cplx> values;  // psi at the requested xs
  BoundaryPair minus, plus;  // psi, psi' at 0- and 0+
  double probe = 0.0;        // source point used
  double probe_spread = 0.0; // max relative difference to the next usable probe
};

namespace detail {

/// Residue samples of G(., x0) at fixed field points, for every probe.
struct ResidueSamples {
  // per probe: values at xs, then (0-, 0+) value and derivative
  std::vector<std::vector<cplx>> vals;
};

inline ResidueSamples circle_average(const ModelKind& kind, const PointInteraction& pint, cplx k0, double rho,
                                     const std::vector<double>& xs, const std::vector<double>& probes) {
  const std::size_t n = xs.size() + 4;
  ResidueSamples out;
  out.vals.assign(probes.size(), std::vector<cplx>(n, 0.0));
  for (int j = 0; j < 4; ++j) {
    const cplx dk = std::polar(rho, pi / 4.0 + j * pi / 2.0);
    const PerturbedGreen g(kind, pint, k0 + dk);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      auto& v = out.vals[p];
      for (std::size_t i = 0; i < xs.size(); ++i) v[i] += 0.25 * dk * g(xs[i], probes[p]).value;
      const GreenValue m = g(0.0, probes[p], Side::minus);
      const GreenValue q = g(0.0, probes[p], Side::plus);
      v[xs.size() + 0] += 0.25 * dk * m.value;
      v[xs.size() + 1] += 0.25 * dk * m.dx;
      v[xs.size() + 2] += 0.25 * dk * q.value;
      v[xs.size() + 3] += 0.25 * dk * q.dx;
    }
  }
  return out;
}

inline double max_rel_diff(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num = std::max(num, std::abs(x[i] - y[i]));
    den = std::max(den, std::abs(y[i]));
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// psi(x) proportional to Res_{k=k0} G(x, x0; k), normalised to psi(0-) = 1,
/// or psi(0+) = 1 when psi(0-) vanishes (the half-lines decouple at b = 1).
///
/// The residue is the average of (k - k0) G over four points on a circle,
/// which leaves an O(rho^4) error, followed by one Richardson step.
inline ResidueWave residue_wavefunction(const ModelKind& kind, const PointInteraction& pint, const ResonancePole& pole,
                                        const std::vector<double>& xs, const ResidueOptions& opt = {}) {
  if (opt.probes.empty()) throw numeric_error(errc::invalid_argument, "no probe points");
  const cplx k0 = pole.k;
  const double rho = opt.radius * std::max(1.0, std::abs(k0));
  const auto r1 = detail::circle_average(kind, pint, k0, rho, xs, opt.probes);
  const auto r2 = detail::circle_average(kind, pint, k0, rho / 2.0, xs, opt.probes);
  const auto r3 = detail::circle_average(kind, pint, k0, rho / 4.0, xs, opt.probes);

  const std::size_t n = xs.size() + 4;
  std::vector<std::vector<cplx>> best(opt.probes.size()), coarse(opt.probes.size());
  std::vector<double> weight(opt.probes.size(), 0.0);
  for (std::size_t p = 0; p < opt.probes.size(); ++p) {
    coarse[p].resize(n);
    best[p].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      coarse[p][i] = (16.0 * r2.vals[p][i] - r1.vals[p][i]) / 15.0;
      best[p][i] = (16.0 * r3.vals[p][i] - r2.vals[p][i]) / 15.0;
    }
    for (std::size_t i = xs.size(); i < n; ++i) weight[p] += std::abs(best[p][i]);
  }

  const double top = *std::max_element(weight.begin(), weight.end());
  if (!(top > 0.0) || !std::isfinite(top)) throw numeric_error(errc::degenerate_pole, "vanishing residue");

  // The residue factorises as c psi(x) psi(x0); a probe on a node of psi
  // (or on a half-line the state does not reach) kills it, so fall through
  // to the next probe.
  auto usable = [&](std::size_t p) { return weight[p] > 1e-6 * top; };
  std::size_t chosen = opt.probes.size();
  for (std::size_t p = 0; p < opt.probes.size(); ++p)
    if (usable(p)) {
      chosen = p;
      break;
    }
  if (chosen == opt.probes.size()) throw numeric_error(errc::probe_node, "every probe sits on a node");
  if (detail::max_rel_diff(coarse[chosen], best[chosen]) > opt.tol)
    throw numeric_error(errc::degenerate_pole, "residue limit does not converge (pole not simple?)");

  auto normalise = [&](std::vector<cplx> v) {
    const cplx m = v[xs.size()], q = v[xs.size() + 2];
    const cplx c = std::abs(m) > 1e-8 * std::abs(q) ? m : q;
    for (auto& x : v) x /= c;
    return v;
  };
  const std::vector<cplx> psi = normalise(best[chosen]);

  ResidueWave out;
  out.probe = opt.probes[chosen];
  for (std::size_t p = chosen + 1; p < opt.probes.size(); ++p)
    if (usable(p)) {
      out.probe_spread = detail::max_rel_diff(normalise(best[p]), psi);
      break;
    }
  if (out.probe_spread > 1e3 * opt.tol)
    throw numeric_error(errc::degenerate_pole, "residue depends on the probe point beyond a global scale");
  out.values.assign(psi.begin(), psi.begin() + static_cast<std::ptrdiff_t>(xs.size()));
  out.minus = {psi[xs.size()], psi[xs.size() + 1]};
  out.plus = {psi[xs.size() + 2], psi[xs.size() + 3]};
  return out;
}

}  // namespace ptres
