#pragma once

// Green's function of H0 + a delta(x) + b delta'(x), with the products
// f delta and f delta' of functions that jump at the origin weighted by
// (zeta, eta):  int f delta = zeta f(0+) + eta f(0-),
//               int f delta' = -(zeta f'(0+) + eta f'(0-)).

#include <cmath>

#include "ptres/error.hpp"
#include "ptres/free_green.hpp"
#include "ptres/types.hpp"

namespace ptres {

/// One-sided limits of G0 and its partials at the origin.
///
/// Superscript (1) is d/dx, (2) is d/dx', (12) the mixed derivative.  The
/// sign label always records the side of the field point x relative to the
/// source:  g2_0p = lim_{x->0+} dG0/dx'(x, 0).  With that reading
/// g1_0p - g1_0m = -2 and g2_0p - g2_0m = +2.
struct GreensCornerData {
  cplx g00;
  cplx g1_0p, g1_0m;
  cplx g2_0p, g2_0m;
  cplx g12_pp, g12_pm, g12_mp, g12_mm;
};

inline GreensCornerData corner_data(const FreeGreen& g0) {
  const Solution l = g0.solutions().left_at_origin();
  const Solution r = g0.solutions().right_at_origin();
  const cplx c = -2.0 / g0.wronskian();
  GreensCornerData cd;
  cd.g00 = c * l.u * r.u;
  cd.g1_0p = c * l.u * r.du;
  cd.g1_0m = c * l.du * r.u;
  cd.g2_0p = c * l.du * r.u;
  cd.g2_0m = c * l.u * r.du;
  // uL' and uR' are continuous at 0, so the mixed derivative has one limit.
  cd.g12_pp = cd.g12_pm = cd.g12_mp = cd.g12_mm = c * l.du * r.du;
  return cd;
}

inline GreensCornerData corner_data(const ModelKind& kind, cplx k) {
  return corner_data(FreeGreen(FreeSolutions(kind, k)));
}

/// The coefficients of the 2x2 closure for G^{(1)}(0+-, x') and of the
/// resulting expression for G(0, x'), transcribed term by term.  zeta + eta
/// is deliberately left unsimplified.
struct CoefficientSet {
  cplx A, B, C, D, E, F, Delta;
  cplx lambda, lambda1, lambda2;
  cplx alpha1, alpha2, alpha3;
};

inline CoefficientSet coefficient_set(const GreensCornerData& cd, const PointInteraction& pint) {
  const double a = pint.a(), b = pint.b(), ze = pint.zeta(), et = pint.eta();
  CoefficientSet c;
  c.A = 1.0 - b * ze * cd.g1_0p;
  c.B = -b * et * cd.g1_0p;
  c.C = (ze + et) * (b * cd.g12_pm - a * cd.g1_0p);
  c.D = -b * ze * cd.g1_0m;
  c.E = 1.0 - b * et * cd.g1_0m;
  c.F = (ze + et) * (b * cd.g12_mp - a * cd.g1_0m);
  c.Delta = 1.0 - b * (ze * cd.g1_0p + et * cd.g1_0m);
  if (std::abs(c.Delta) < 1e-13)
    throw numeric_error(errc::degenerate_delta, "Delta = 1 - b(zeta G0'(0+,0) + eta G0'(0-,0)) vanishes");

  const cplx ec_bf = c.E * c.C - c.B * c.F;
  const cplx af_dc = c.A * c.F - c.D * c.C;
  c.lambda = 1.0 - (b * (ze * cd.g2_0p + et * cd.g2_0m) - a * (ze + et) * cd.g00) -
             b * cd.g00 / c.Delta * (et * af_dc + ze * ec_bf);
  c.lambda1 = b * cd.g00 / c.Delta * (et * c.A - ze * c.B);
  c.lambda2 = b * cd.g00 / c.Delta * (ze * c.E - et * c.D);

  c.alpha1 = (b * (ze * ec_bf + et * af_dc) - a * c.Delta * (ze + et)) / c.Delta;
  c.alpha2 = (b * (ze * (-c.B * c.lambda + ec_bf * c.lambda1) + et * (c.A * c.lambda + af_dc * c.lambda1)) -
              a * c.Delta * c.lambda1 * (ze + et)) /
             c.Delta;
  c.alpha3 = (b * (ze * (c.E * c.lambda - ec_bf * c.lambda2) - et * (c.D * c.lambda - af_dc * c.lambda2)) -
              a * c.Delta * c.lambda2 * (ze + et)) /
             c.Delta;
  return c;
}

/// Value and x-derivative of the perturbed Green's function.
struct GreenValue {
  cplx value, dx;
};

/// G(x, x'; k) for H0 + a delta + b delta'.
///
/// Inserting the point potential into G = G0 - int G0 V G and applying the
/// weighted products gives, with S = zeta G(0+,x') + eta G(0-,x') and
/// S' = zeta G^(1)(0+,x') + eta G^(1)(0-,x'),
///
///   G(x,x') = G0(x,x') + G0(x,0)(b S' - a S) + b G0^(2)(x,0) S,
///
/// and a 2x2 linear system for (S, S') from the limits x -> 0+-.  Its
/// determinant equals lambda * Delta of the coefficient set, so lambda = 0
/// marks the poles.
class PerturbedGreen {
 public:
  PerturbedGreen(const ModelKind& kind, const PointInteraction& pint, cplx k)
      : g0_(FreeSolutions(kind, k)), pint_(pint), cd_(corner_data(g0_)) {
    const double a = pint.a(), b = pint.b(), ze = pint.zeta(), et = pint.eta();
    g1z_ = ze * cd_.g1_0p + et * cd_.g1_0m;
    const cplx g2z = ze * cd_.g2_0p + et * cd_.g2_0m;
    const cplx g12z = ze * cd_.g12_pp + et * cd_.g12_mm;
    a11_ = 1.0 + a * cd_.g00 - b * g2z;
    a12_ = -b * cd_.g00;
    a21_ = a * g1z_ - b * g12z;
    a22_ = 1.0 - b * g1z_;
    det_ = a11_ * a22_ - a12_ * a21_;
    lambda_ = std::abs(a22_) > 1e-13 ? det_ / a22_ : det_;
    if (std::abs(lambda_) < 1e-13)
      throw numeric_error(errc::pole_of_green, "lambda vanishes: k is a pole of the perturbed Green's function");
  }

  const GreensCornerData& corner() const { return cd_; }
  const FreeGreen& free() const { return g0_; }
  cplx lambda() const { return lambda_; }
  cplx determinant() const { return det_; }

  /// x == 0 is read as the one-sided limit given by `side`.
  GreenValue operator()(double x, double xp, Side side = Side::plus) const {
    const double a = pint_.a(), b = pint_.b(), ze = pint_.zeta(), et = pint_.eta();
    const GreenSample direct = g0_(x, xp, side);
    const GreenSample to_origin = g0_(x, 0.0, side);
    const GreenSample from_plus = g0_(0.0, xp, Side::plus);
    const GreenSample from_minus = g0_(0.0, xp, Side::minus);

    const cplx r1 = from_plus.value;
    const cplx r2 = ze * from_plus.dx + et * from_minus.dx;
    const cplx s = (r1 * a22_ - a12_ * r2) / det_;
    const cplx sp = (a11_ * r2 - a21_ * r1) / det_;
    const cplx mix = b * sp - a * s;

    return {direct.value + to_origin.value * mix + b * to_origin.dxp * s,
            direct.dx + to_origin.dx * mix + b * to_origin.dxdxp * s};
  }

 private:
  FreeGreen g0_;
  PointInteraction pint_;
  GreensCornerData cd_;
  cplx g1z_;
  cplx a11_, a12_, a21_, a22_, det_, lambda_;
};

/// G(x, x'; k) for a single point; builds the closure each call.
inline cplx full_green(const ModelKind& kind, const PointInteraction& pint, double x, double xp, cplx k) {
  return PerturbedGreen(kind, pint, k)(x, xp).value;
}

}  // namespace ptres
