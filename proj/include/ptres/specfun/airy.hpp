#pragma once

#include <cmath>

#include "ptres/specfun/extended.hpp"
#include "ptres/types.hpp"

namespace ptres::specfun {

struct AiryValues {
  cplx ai, aip, bi, bip;
};

/// Radius inside which the Maclaurin series is summed (in extended precision).
inline constexpr double airy_series_radius = 8.0;

namespace detail {

// Ai(0), -Ai'(0) and sqrt(3); in the series they multiply sums that cancel by
// up to 1e14, so they are kept as double-double pairs.
inline constexpr double airy_c1 = 0.3550280538878172, airy_c1_lo = 2.05233632436212e-17;
inline constexpr double airy_c2 = 0.2588194037928068, airy_c2_lo = -2.522243111610832e-17;
inline constexpr double sqrt3 = 1.7320508075688772, sqrt3_lo = 1.0035084221806903e-16;

inline AiryValues airy_series(cplx z) {
  const wcplx w(z);
  const wcplx z3 = w * w * w;
  // f = sum a_k z^{3k}, g = sum b_k z^{3k+1}; fd, gd their derivatives.
  wcplx pk(1);  // z^{3k}
  wide a = 1, b = 1, da = 0, db = 1;
  wcplx f(1), g = w, fd(0), gd(1);
  wide peak = 1;
  for (int k = 1; k < 400; ++k) {
    const wide k3 = 3 * k;
    if (k == 1) {
      da = wide(1) / 2;  // coefficient of z^2 in f'
    } else {
      da /= (k3 - 3) * (k3 - 1);
    }
    a /= (k3 - 1) * k3;
    db /= (k3 - 2) * k3;
    b /= k3 * (k3 + 1);
    const wcplx pprev = pk;
    pk *= z3;
    const wcplx tf = a * pk;
    const wcplx tg = b * pk * w;
    // derivative terms: z^{3k-1} = z^{3(k-1)} z^2, z^{3k}
    const wcplx tfd = da * pprev * w * w;
    const wcplx tgd = db * pk;
    f += tf;
    g += tg;
    fd += tfd;
    gd += tgd;
    const wide m = mag1(tf) + mag1(tg) + mag1(tfd) + mag1(tgd);
    if (m > peak) peak = m;
    if (k > 3 && m < peak * wide(1e-36)) break;
  }
  const wide c1 = wide(airy_c1) + wide(airy_c1_lo);
  const wide c2 = wide(airy_c2) + wide(airy_c2_lo);
  const wide s3 = wide(sqrt3) + wide(sqrt3_lo);
  AiryValues out;
  out.ai = (c1 * f - c2 * g).narrow();
  out.aip = (c1 * fd - c2 * gd).narrow();
  out.bi = (s3 * (c1 * f + c2 * g)).narrow();
  out.bip = (s3 * (c1 * fd + c2 * gd)).narrow();
  return out;
}

/// Asymptotic Ai and Ai' for |z| beyond the series radius, any argument.
inline void airy_ai_asymptotic(cplx z, cplx& ai, cplx& aip) {
  const double sqrt_pi = std::sqrt(pi);
  const bool oscillatory = std::abs(std::arg(z)) > 2.0 * pi / 3.0;
  const cplx w = oscillatory ? -z : z;
  const cplx zeta = (2.0 / 3.0) * w * std::sqrt(w);
  const cplx w14 = std::sqrt(std::sqrt(w));

  // u_k, v_k with alternating signs folded in as we go.
  constexpr int kmax = 60;
  double u[kmax], v[kmax];
  u[0] = v[0] = 1.0;
  for (int k = 1; k < kmax; ++k) {
    u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u[k];
  }

  if (!oscillatory) {
    cplx su = 0.0, sv = 0.0, p = 1.0;
    double last = INFINITY;
    for (int k = 0; k < kmax; ++k) {
      const double sgn = (k % 2) ? -1.0 : 1.0;
      const cplx tu = sgn * u[k] * p, tv = sgn * v[k] * p;
      const double m = std::abs(tu) + std::abs(tv);
      if (m > last) break;  // optimal truncation
      su += tu;
      sv += tv;
      last = m;
      if (m < 1e-17 * (std::abs(su) + std::abs(sv))) break;
      p /= zeta;
    }
    const cplx e = std::exp(-zeta);
    ai = e / (2.0 * sqrt_pi * w14) * su;
    aip = -w14 * e / (2.0 * sqrt_pi) * sv;
    return;
  }

  // Ai(-w), Ai'(-w) with |arg w| < pi/3.
  cplx su_e = 0.0, su_o = 0.0, sv_e = 0.0, sv_o = 0.0;
  cplx p = 1.0;
  double last = INFINITY;
  for (int k = 0; k + 1 < kmax; k += 2) {
    const double sgn = ((k / 2) % 2) ? -1.0 : 1.0;
    const cplx te = sgn * u[k] * p, tve = sgn * v[k] * p;
    const cplx p1 = p / zeta;
    const cplx to = sgn * u[k + 1] * p1, tvo = sgn * v[k + 1] * p1;
    const double m = std::abs(te) + std::abs(to) + std::abs(tve) + std::abs(tvo);
    if (m > last) break;
    su_e += te;
    su_o += to;
    sv_e += tve;
    sv_o += tvo;
    last = m;
    if (m < 1e-17 * (std::abs(su_e) + std::abs(sv_e) + std::abs(su_o) + std::abs(sv_o))) break;
    p = p1 / zeta;
  }
  const cplx phase = zeta - pi / 4.0;
  const cplx c = std::cos(phase), s = std::sin(phase);
  ai = (c * su_e + s * su_o) / (sqrt_pi * w14);
  // d/dz Ai(z) at z = -w
  aip = w14 / sqrt_pi * (s * sv_e - c * sv_o);
}

inline AiryValues airy_asymptotic(cplx z) {
  AiryValues out;
  airy_ai_asymptotic(z, out.ai, out.aip);
  // Bi(z) = e^{i pi/6} Ai(z w) + e^{-i pi/6} Ai(z w*),  w = e^{2 pi i/3}
  const cplx om = std::polar(1.0, 2.0 * pi / 3.0);
  const cplx omc = std::conj(om);
  cplx a1, a1p, a2, a2p;
  airy_ai_asymptotic(z * om, a1, a1p);
  airy_ai_asymptotic(z * omc, a2, a2p);
  const cplx e1 = std::polar(1.0, pi / 6.0);
  const cplx e2 = std::conj(e1);
  out.bi = e1 * a1 + e2 * a2;
  out.bip = e1 * om * a1p + e2 * omc * a2p;
  return out;
}

}  // namespace detail

/// Airy functions Ai, Ai', Bi, Bi' at complex argument.
inline AiryValues airy(cplx z) {
  if (std::abs(z) <= airy_series_radius) return detail::airy_series(z);
  return detail::airy_asymptotic(z);
}

/// Ai and Ai' only.
inline void airy_ai(cplx z, cplx& ai, cplx& aip) {
  if (std::abs(z) <= airy_series_radius) {
    const auto v = detail::airy_series(z);
    ai = v.ai;
    aip = v.aip;
    return;
  }
  detail::airy_ai_asymptotic(z, ai, aip);
}

struct AiryCombo {
  cplx ci, cip;
};

/// Ci^{+/-}(z) = Ai(z) +/- i Bi(z) together with its derivative.
///
/// Evaluated as 2 e^{+/- i pi/3} Ai(z e^{-/+ 2 pi i/3}) rather than by adding
/// Ai and Bi: Ci^+ is recessive in the upper half-plane and Ci^- in the
/// lower one, exactly where Ai and Bi are both exponentially large.
inline AiryCombo ci_combo(cplx z, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  const cplx rot = std::polar(1.0, -s * 2.0 * pi / 3.0);
  const cplx pre = 2.0 * std::polar(1.0, s * pi / 3.0);
  cplx ai, aip;
  airy_ai(z * rot, ai, aip);
  return {pre * ai, pre * rot * aip};
}

}  // namespace ptres::specfun
