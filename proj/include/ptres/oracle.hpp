#pragma once

// Special-function-free reference values obtained by integrating the
// Schroedinger equation along the real axis.  Used only to cross-check the
// closed forms.

#include <algorithm>
#include <array>
#include <cmath>

#include "ptres/error.hpp"
#include "ptres/free_green.hpp"
#include "ptres/types.hpp"

namespace ptres::oracle {

/// psi and psi' with a running log-scale so |psi| stays in [1e-6, 1e6].
struct ShootState {
  cplx psi, dpsi;
  double log_scale = 0.0;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double min_step = 1e-12;
  int max_steps = 2000000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::array<cplx, 2>;

inline Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

}  // namespace detail

/// Integrates psi'' = 2 (V0(x) - z) psi from x0 to x1 (either direction).
inline ShootState integrate(const ModelKind& kind, cplx z, ShootState s, double x0, double x1,
                            const IntegratorOptions& opt = {}) {
  using detail::Vec;
  if (x0 == x1) return s;
  const auto rhs = [&](double x, const Vec& y) -> Vec { return {y[1], 2.0 * (left_potential(kind, x) - z) * y[0]}; };
  const double dir = x1 > x0 ? 1.0 : -1.0;
  double x = x0;
  Vec y{s.psi, s.dpsi};
  double h = dir * std::min(0.01, std::abs(x1 - x0));
  // The potential has a kink at the origin; never step across it.
  const auto next_stop = [&](double from) {
    if ((from < 0.0 && x1 > 0.0) || (from > 0.0 && x1 < 0.0)) return 0.0;
    return x1;
  };
  int steps = 0;
  while (dir * (x1 - x) > 0.0) {
    if (++steps > opt.max_steps) throw numeric_error(errc::stiffness_failure, "step budget exhausted");
    const double stop = next_stop(x);
    if (dir * (x + h - stop) > 0.0) h = stop - x;
    const Vec k1 = rhs(x, y);
    const Vec k2 = rhs(x + detail::c2 * h, detail::axpy(y, h, {{detail::a21, &k1}}));
    const Vec k3 = rhs(x + detail::c3 * h, detail::axpy(y, h, {{detail::a31, &k1}, {detail::a32, &k2}}));
    const Vec k4 =
        rhs(x + detail::c4 * h, detail::axpy(y, h, {{detail::a41, &k1}, {detail::a42, &k2}, {detail::a43, &k3}}));
    const Vec k5 = rhs(x + detail::c5 * h, detail::axpy(y, h,
                                                        {{detail::a51, &k1},
                                                         {detail::a52, &k2},
                                                         {detail::a53, &k3},
                                                         {detail::a54, &k4}}));
    const Vec k6 = rhs(x + h, detail::axpy(y, h,
                                           {{detail::a61, &k1},
                                            {detail::a62, &k2},
                                            {detail::a63, &k3},
                                            {detail::a64, &k4},
                                            {detail::a65, &k5}}));
    const Vec y5 = detail::axpy(
        y, h, {{detail::b1, &k1}, {detail::b3, &k3}, {detail::b4, &k4}, {detail::b5, &k5}, {detail::b6, &k6}});
    const Vec k7 = rhs(x + h, y5);
    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const cplx e = h * (detail::e1 * k1[i] + detail::e3 * k3[i] + detail::e4 * k4[i] + detail::e5 * k5[i] +
                          detail::e6 * k6[i] + detail::e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (err <= 1.0) {
      x += h;
      y = y5;
      // Renormalise to keep magnitudes moderate.
      const double m = std::abs(y[0]) + std::abs(y[1]);
      if (!std::isfinite(m)) throw numeric_error(errc::blow_up, "solution overflowed between renormalisations");
      if (m > 1e6 || m < 1e-6) {
        s.log_scale += std::log(m);
        y[0] /= m;
        y[1] /= m;
      }
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < opt.min_step && dir * (x1 - x) > opt.min_step)
      throw numeric_error(errc::stiffness_failure, "step size underflow");
  }
  s.psi = y[0];
  s.dpsi = y[1];
  return s;
}

/// Moves x_min left until the forbidden-region action int Re kappa exceeds
/// `action`, so the admixture of the growing solution is below e^{-2 action}.
inline double deep_start(const ModelKind& kind, cplx z, double x_min, double action = 25.0) {
  for (int iter = 0; iter < 60; ++iter) {
    double s = 0.0;
    const int n = 400;
    const double dx = -x_min / n;
    for (int i = 0; i < n; ++i) {
      const double x = x_min + (i + 0.5) * dx;
      s += std::max(0.0, std::sqrt(2.0 * (left_potential(kind, x) - z)).real()) * dx;
    }
    if (s >= action) return x_min;
    x_min *= 1.25;
  }
  throw numeric_error(errc::invalid_argument, "could not place the shooting start deep enough");
}

/// Localised left solution integrated from deep in the forbidden region.
inline ShootState left_solution(const ModelKind& kind, cplx z, double x, double x_min = -8.0) {
  const double start = deep_start(kind, z, std::min(x_min, -8.0));
  const cplx kappa = std::sqrt(2.0 * (left_potential(kind, start) - z));
  return integrate(kind, z, ShootState{1.0, kappa}, start, x);
}

/// u'(0)/u(0) of the solution that decays as x -> -inf.
inline cplx shoot_logderiv(const ModelKind& kind, cplx z, double x_min = -8.0) {
  if (x_min > -8.0) throw numeric_error(errc::invalid_argument, "x_min must be <= -8");
  const ShootState s = left_solution(kind, z, 0.0, x_min);
  return s.dpsi / s.psi;
}

/// Outgoing solution: e^{ikx} for x >= 0, integrated leftwards otherwise.
inline ShootState right_solution(const ModelKind& kind, cplx k, double x) {
  if (x >= 0.0) {
    const cplx e = std::exp(I * k * x);
    return {e, I * k * e};
  }
  return integrate(kind, 0.5 * k * k, ShootState{1.0, I * k}, 0.0, x);
}

/// Variation-of-parameters Green's function, G = -2 uL(x<) uR(x>) / W, with
/// both solutions obtained by direct integration.  k fixes the sheet.
inline cplx vp_green(const ModelKind& kind, cplx k, double x, double xp) {
  const cplx z = 0.5 * k * k;
  const double lo = std::min(x, xp), hi = std::max(x, xp);
  const ShootState l = left_solution(kind, z, lo);
  const ShootState r_lo = right_solution(kind, k, lo);
  const ShootState r_hi = right_solution(kind, k, hi);
  const cplx w = l.psi * r_lo.dpsi - l.dpsi * r_lo.psi;
  const double sc = std::abs(l.psi * r_lo.dpsi) + std::abs(l.dpsi * r_lo.psi);
  if (std::abs(w) < 1e-12 * sc) throw numeric_error(errc::wronskian_underflow, "Wronskian vanishes");
  // uL's scale cancels; uR's two samples differ by their tracked log-scales.
  return -2.0 * l.psi * r_hi.psi * std::exp(r_hi.log_scale - r_lo.log_scale) / w;
}

/// Physical-sheet convenience overload.
inline cplx vp_green_energy(const ModelKind& kind, cplx z, double x, double xp) {
  return vp_green(kind, SpectralPoint::from_energy(z).k, x, xp);
}

}  // namespace ptres::oracle
