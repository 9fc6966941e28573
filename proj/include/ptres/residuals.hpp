#pragma once

// Pole conditions of the perturbed Green's function as residual functions of
// the complex momentum k:
//
//   F(k) = i k - 2a/P - (M/P) u'(0,E)/u(0,E),   E = k^2/2,
//   P = 1 + 2b + 4 zeta eta b^2,  M = 1 - 2b + 4 zeta eta b^2.

#include <cmath>
#include <functional>

#include "ptres/error.hpp"
#include "ptres/specfun/airy.hpp"
#include "ptres/specfun/gamma.hpp"
#include "ptres/types.hpp"

namespace ptres {

using LogDerivative = std::function<cplx(cplx)>;
using ResidualFn = std::function<cplx(cplx)>;

namespace detail {

inline double checked_plus_factor(const PointInteraction& pint) {
  const double p = pint.plus_factor();
  if (std::abs(p) < 1e-13)
    throw numeric_error(errc::degenerate_denominator, "1 + 2b + 4 zeta eta b^2 vanishes");
  return p;
}

}  // namespace detail

/// Semi-oscillator: u'(0)/u(0) = 2 g(eps) with eps = E = k^2/2.
inline cplx residual_oscillator(cplx k, const PointInteraction& pint) {
  const double p = detail::checked_plus_factor(pint);
  const double m = pint.minus_factor();
  const cplx lhs = I * k - 2.0 * pint.a() / p;
  if (m == 0.0) return lhs;
  return lhs - (m / p) * 2.0 * specfun::g_ratio(0.5 * k * k);
}

/// Semi-linear model in Airy units: k is the scaled momentum (k^2 = eps) and
/// the delta strength is converted with the length scale (1/2F)^{1/3}.  The
/// localised left solution is Ai(-xi - eps), whose log-derivative at the
/// origin is -Ai'(-eps)/Ai(-eps).
inline cplx residual_linear(cplx k, const PointInteraction& pint, double field) {
  const double p = detail::checked_plus_factor(pint);
  const double m = pint.minus_factor();
  const double s = SemiLinear{field}.scale();
  const cplx lhs = I * k - 2.0 * pint.a() * s / p;
  if (m == 0.0) return lhs;
  const auto v = specfun::airy(-k * k);
  if (std::abs(v.ai) < 1e-300 || std::abs(v.ai) < 1e-15 * std::abs(v.aip))
    throw numeric_error(errc::airy_denominator_zero, "Ai(-eps) vanishes");
  return lhs - (m / p) * (-v.aip / v.ai);
}

/// Any confining left potential, given the physical log-derivative u'(0,E)/u(0,E).
inline cplx residual_general(cplx k, const PointInteraction& pint, const LogDerivative& logderiv) {
  const double p = detail::checked_plus_factor(pint);
  const double m = pint.minus_factor();
  const cplx lhs = I * k - 2.0 * pint.a() / p;
  if (m == 0.0) return lhs;
  return lhs - (m / p) * logderiv(0.5 * k * k);
}

/// Physical momentum <-> Airy-scaled momentum.
inline cplx scaled_momentum(cplx k, double field) { return k * SemiLinear{field}.scale(); }
inline cplx physical_momentum(cplx ks, double field) { return ks / SemiLinear{field}.scale(); }
/// E = eps / (2 (1/2F)^{2/3})
inline cplx physical_energy_from_scaled(cplx eps, double field) {
  const double s = SemiLinear{field}.scale();
  return eps / (2.0 * s * s);
}

/// Analytic log-derivative providers (physical units).
inline LogDerivative oscillator_logderiv() {
  return [](cplx e) { return 2.0 * specfun::g_ratio(e); };
}

inline LogDerivative linear_logderiv(double field) {
  const double s = SemiLinear{field}.scale();
  return [s](cplx e) {
    const auto v = specfun::airy(-2.0 * s * s * e);
    return -v.aip / (s * v.ai);
  };
}

/// Residual in physical momentum for either model.
inline ResidualFn model_residual(const ModelKind& kind, const PointInteraction& pint) {
  if (const auto* lin = std::get_if<SemiLinear>(&kind)) {
    const double f = lin->field, s = lin->scale();
    return [pint, f, s](cplx k) { return residual_linear(k * s, pint, f) / s; };
  }
  return [pint](cplx k) { return residual_oscillator(k, pint); };
}

/// An entire function with exactly the zeros of model_residual: the residual
/// times 1/Gamma((3-k^2)/4) (oscillator) or Ai(-eps) (linear).  Used for
/// argument-principle counting, which would otherwise subtract the residual's
/// real-axis poles.
inline ResidualFn model_counting_function(const ModelKind& kind, const PointInteraction& pint) {
  const double p = detail::checked_plus_factor(pint);
  const double m = pint.minus_factor();
  if (m == 0.0) return model_residual(kind, pint);
  if (const auto* lin = std::get_if<SemiLinear>(&kind)) {
    const double s = lin->scale();
    return [pint, p, m, s](cplx k) {
      const cplx ks = k * s;
      const auto v = specfun::airy(-ks * ks);
      return (I * ks - 2.0 * pint.a() * s / p) * v.ai + (m / p) * v.aip;
    };
  }
  return [pint, p, m](cplx k) {
    const cplx e = 0.5 * k * k;
    const cplx rp = specfun::rgamma((3.0 - 2.0 * e) / 4.0);
    const cplx rq = specfun::rgamma((1.0 - 2.0 * e) / 4.0);
    return (I * k - 2.0 * pint.a() / p) * rp - (m / p) * 2.0 * rq;
  };
}

}  // namespace ptres
