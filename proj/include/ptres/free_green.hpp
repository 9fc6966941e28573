#pragma once

// Free Green's functions G0 of the two confining half-line models.
//
// G0(x, x'; k) = -2 uL(x<) uR(x>) / W,   W = uL uR' - uL' uR,
//
// with uL the solution localised as x -> -inf and uR the solution that is a
// pure outgoing wave e^{ikx} for x > 0.  This normalisation gives the
// derivative jump dG0/dx (x'+) - dG0/dx (x'-) = -2 demanded by
// (H0 - z) G0 = delta(x - x') with H0 = -1/2 d^2/dx^2 + V0.

#include <cmath>

#include "ptres/error.hpp"
#include "ptres/specfun/airy.hpp"
#include "ptres/specfun/gamma.hpp"
#include "ptres/specfun/pcf.hpp"
#include "ptres/types.hpp"

namespace ptres {

/// Value and x-derivative of a solution at one point.
struct Solution {
  cplx u, du;
};

namespace detail {

inline constexpr double sqrt2 = 1.41421356237309504880;
/// Beyond t = -sqrt2 x = 2.5 the oscillator's left solution is taken from U(a, t).
inline constexpr double pcf_switch = 2.5;

/// sin(kx)/k, finite as k -> 0.
inline cplx sinc_x(cplx k, double x) {
  const cplx kx = k * x;
  if (std::abs(kx) < 1e-4) return x * (1.0 - kx * kx / 6.0 + kx * kx * kx * kx / 120.0);
  return std::sin(kx) / k;
}

}  // namespace detail

/// The two fundamental solutions of one model at momentum k.  The energy is
/// z = k^2/2; the left solution only depends on z, the right one on k.
class FreeSolutions {
 public:
  FreeSolutions(const ModelKind& kind, cplx k) : kind_(kind), k_(k) {
    if (!is_finite(k)) throw numeric_error(errc::invalid_argument, "momentum must be finite");
    if (const auto* lin = std::get_if<SemiLinear>(&kind_)) {
      scale_ = lin->scale();
      eps_ = k_ * k_ * scale_ * scale_;  // 2 s^2 z
      // uR = cA Ai + cB Ci with Ci = Ai +/- i Bi recessive along the whole
      // path -xi - eps, xi < 0 (which keeps the sign of im(-eps)).  The plain
      // Ai/Bi basis cancels catastrophically there once im(eps) != 0.
      const cplx z0 = -eps_;
      ci_sign_ = z0.imag() < 0.0 ? -1 : 1;
      cplx ai, aip;
      specfun::airy_ai(z0, ai, aip);
      const auto ci = specfun::ci_combo(z0, ci_sign_);
      const cplx w = double(ci_sign_) * I / pi;  // W(Ai, Ci^{+/-})
      const cplx ks = k_ * scale_;
      ca_ = (ci.cip + I * ks * ci.ci) / w;
      cb_ = -(aip + I * ks * ai) / w;
    } else {
      const cplx z = energy();
      // uL = y1/Gamma(p) + 2 y2/Gamma(q): the localised solution scaled so that
      // it stays finite where g(eps) has poles.
      rp_ = specfun::rgamma((3.0 - 2.0 * z) / 4.0);
      rq_ = specfun::rgamma((1.0 - 2.0 * z) / 4.0);
    }
    left0_ = left(0.0);
    right0_ = {1.0, I * k_};
  }

  const ModelKind& kind() const { return kind_; }
  cplx momentum() const { return k_; }
  cplx energy() const { return 0.5 * k_ * k_; }

  /// Solution decaying as x -> -inf, continued through the origin.
  Solution left(double x) const {
    if (x > 0.0) {
      // Free continuation with the same value and slope at 0.
      const Solution s0 = left0_;
      const cplx c = std::cos(k_ * x);
      return {s0.u * c + s0.du * detail::sinc_x(k_, x), -s0.u * k_ * std::sin(k_ * x) + s0.du * c};
    }
    if (std::holds_alternative<SemiOscillator>(kind_)) {
      const cplx a = -energy();
      const double t = -detail::sqrt2 * x;
      if (t > detail::pcf_switch) {
        // The Gamma-weighted even/odd sum cancels to e^{-x^2} here; use the
        // recessive solution directly: uL = 2^{a/2+1/4} U(a, -sqrt2 x) / sqrt(pi).
        const auto u = specfun::pcf_u(a, t);
        const cplx c = std::exp((a / 2.0 + 0.25) * std::log(2.0)) / std::sqrt(pi);
        return {c * u.u, -detail::sqrt2 * c * u.up};
      }
      const auto p = specfun::pcf_pair(a, detail::sqrt2 * x);
      // y1(x) = w1(sqrt2 x), y2(x) = w2(sqrt2 x)/sqrt2
      const cplx y1 = p.y1, y1p = detail::sqrt2 * p.y1p;
      const cplx y2 = p.y2 / detail::sqrt2, y2p = p.y2p;
      return {rp_ * y1 + 2.0 * rq_ * y2, rp_ * y1p + 2.0 * rq_ * y2p};
    }
    cplx ai, aip;
    specfun::airy_ai(-x / scale_ - eps_, ai, aip);
    return {ai, -aip / scale_};
  }

  /// Outgoing solution, e^{ikx} for x >= 0, continued into the confining side.
  Solution right(double x) const {
    if (x >= 0.0) {
      const cplx e = std::exp(I * k_ * x);
      return {e, I * k_ * e};
    }
    if (std::holds_alternative<SemiOscillator>(kind_)) {
      const auto p = specfun::pcf_pair(-energy(), detail::sqrt2 * x);
      const cplx y1 = p.y1, y1p = detail::sqrt2 * p.y1p;
      const cplx y2 = p.y2 / detail::sqrt2, y2p = p.y2p;
      return {y1 + I * k_ * y2, y1p + I * k_ * y2p};
    }
    // Equal to pi (alpha Ai - beta Bi) with alpha = Bi'(-eps) + i ks Bi(-eps),
    // beta = Ai'(-eps) + i ks Ai(-eps); see the constructor for the basis.
    const cplx zx = -x / scale_ - eps_;
    cplx ai, aip;
    specfun::airy_ai(zx, ai, aip);
    const auto ci = specfun::ci_combo(zx, ci_sign_);
    return {ca_ * ai + cb_ * ci.ci, -(ca_ * aip + cb_ * ci.cip) / scale_};
  }

  Solution left_at_origin() const { return left0_; }
  Solution right_at_origin() const { return right0_; }

  /// uL uR' - uL' uR (x-independent: neither model has a first-derivative term).
  cplx wronskian() const { return left0_.u * right0_.du - left0_.du * right0_.u; }

  /// uL'(0)/uL(0); the quantity the pole conditions are built from.
  cplx left_log_derivative() const { return left0_.du / left0_.u; }

 private:
  ModelKind kind_;
  cplx k_;
  double scale_ = 1.0;
  cplx eps_ = 0.0;
  int ci_sign_ = 1;
  cplx ca_ = 0.0, cb_ = 0.0;
  cplx rp_ = 0.0, rq_ = 0.0;
  Solution left0_{}, right0_{};
};

/// G0 and its first partials at one (x, x') pair.
struct GreenSample {
  cplx value;   // G0(x, x')
  cplx dx;      // dG0/dx
  cplx dxp;     // dG0/dx'
  cplx dxdxp;   // d^2 G0 / dx dx'
};

/// Which side of the source the field point is taken on when x == x'.
enum class Side { minus, plus };

/// Free Green's function built from one set of fundamental solutions.
class FreeGreen {
 public:
  explicit FreeGreen(const FreeSolutions& sol) : sol_(sol), w_(sol.wronskian()) {
    const Solution l = sol.left_at_origin();
    const Solution r = sol.right_at_origin();
    const double scale = std::abs(l.u * r.du) + std::abs(l.du * r.u);
    if (std::abs(w_) < 1e-13 * scale)
      throw numeric_error(errc::singular_energy, "Wronskian of the free solutions vanishes (G0 pole)");
  }

  const FreeSolutions& solutions() const { return sol_; }
  cplx wronskian() const { return w_; }

  /// Evaluates G0(x, x'); when x == x' the field point is placed on `side`.
  GreenSample operator()(double x, double xp, Side side = Side::plus) const {
    const bool field_right = x > xp || (x == xp && side == Side::plus);
    const double lo = field_right ? xp : x;
    const double hi = field_right ? x : xp;
    return from_solutions(sol_.left(lo), sol_.right(hi), field_right);
  }

  /// Same as above, with the left solution at `lo` and the right one at `hi`
  /// supplied by the caller (avoids recomputing special functions).
  GreenSample from_solutions(const Solution& l, const Solution& r, bool field_right) const {
    const cplx c = -2.0 / w_;
    if (field_right) return {c * l.u * r.u, c * l.u * r.du, c * l.du * r.u, c * l.du * r.du};
    return {c * l.u * r.u, c * l.du * r.u, c * l.u * r.du, c * l.du * r.du};
  }

 private:
  FreeSolutions sol_;
  cplx w_;
};

/// G0 of the semi-oscillator at energy z (physical sheet, k = sqrt(2z)).
inline cplx g0_oscillator(double x, double xp, cplx z) {
  return FreeGreen(FreeSolutions(SemiOscillator{}, SpectralPoint::from_energy(z).k))(x, xp).value;
}

/// G0 of the semi-linear model at energy z, field F, physical coordinates.
inline cplx g0_linear(double x, double xp, cplx z, double field) {
  return FreeGreen(FreeSolutions(make_linear(field), SpectralPoint::from_energy(z).k))(x, xp).value;
}

}  // namespace ptres
