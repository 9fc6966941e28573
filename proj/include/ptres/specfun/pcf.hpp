#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ptres/error.hpp"
#include "ptres/specfun/extended.hpp"
#include "ptres/types.hpp"

namespace ptres::specfun {

/// Even/odd solutions of w'' = (x^2/4 + a) w and their x-derivatives,
/// normalised by y1(0) = 1, y1'(0) = 0, y2(0) = 0, y2'(0) = 1.
struct PcfPair {
  cplx y1, y1p, y2, y2p;

  cplx wronskian() const { return y1 * y2p - y1p * y2; }
};

inline constexpr double pcf_max_abs_x = 40.0;

/// Taylor series of the ODE about the origin, c_{n+2} = (a c_n + c_{n-2}/4) / ((n+1)(n+2)),
/// summed in extended precision.
inline PcfPair pcf_pair(cplx a, double x) {
  if (!(std::abs(x) <= pcf_max_abs_x))
    throw numeric_error(errc::working_range_exceeded, "pcf_pair needs |x| <= 40");
  using detail::wcplx;
  using detail::wide;

  const wcplx wa(a);
  const wide wx = x;
  // Two independent coefficient streams; the even solution only has even
  // powers and the odd one only odd powers, so carry them as c[n-2], c[n].
  // Even: c0 = 1, c2 = a/2.  Odd: c1 = 1, c3 = a/6.
  wcplx e_nm2(0), e_n(1);  // c_{n-2}, c_n for n = 0
  wcplx o_nm2(0), o_n(1);  // for n = 1
  wide xn = 1;             // x^n for the even stream (n even)
  wcplx y1(0), y1p(0), y2(0), y2p(0);
  wide peak = 1;
  int quiet = 0;
  for (int n = 0; n < 20000; n += 2) {
    // even stream: term c_n x^n, derivative n c_n x^{n-1}
    const wcplx te = e_n * xn;
    const wcplx tep = n > 0 ? e_n * (wide(n) * xn / wx) : wcplx(0);
    // odd stream index m = n + 1: c_m x^m, derivative m c_m x^{m-1} = m c_m x^n
    const wcplx to = o_n * (xn * wx);
    const wcplx top = o_n * (wide(n + 1) * xn);
    y1 += te;
    y1p += tep;
    y2 += to;
    y2p += top;

    const wide m = detail::mag1(te) + detail::mag1(tep) + detail::mag1(to) + detail::mag1(top);
    if (m > peak) peak = m;
    // Terms are not monotone while n is small compared to x^2 and |a|; require
    // a run of negligible terms before stopping.
    if (m < peak * wide(1e-34)) {
      if (++quiet > 3) break;
    } else {
      quiet = 0;
    }

    const wide nn = n;
    const wcplx e_next = (wa * e_n + e_nm2 / 4) / ((nn + 1) * (nn + 2));
    e_nm2 = e_n;
    e_n = e_next;
    const wcplx o_next = (wa * o_n + o_nm2 / 4) / ((nn + 2) * (nn + 3));
    o_nm2 = o_n;
    o_n = o_next;
    xn *= wx * wx;
    if (x == 0.0) break;
  }
  return {y1.narrow(), y1p.narrow(), y2.narrow(), y2p.narrow()};
}

/// U(a, t) and dU/dt for real t >= 0: the solution of w'' = (t^2/4 + a) w
/// that decays as t -> +inf, with U(a, 0) = sqrt(pi) / (2^{a/2+1/4} Gamma(3/4 + a/2)).
///
/// Starts from the large-t expansion
///   U ~ e^{-t^2/4} t^{-a-1/2} sum_s (-1)^s (1/2 + a)_{2s} / (s! (2t^2)^s)
/// far out and integrates inwards with local Taylor series; inwards is the
/// direction in which U dominates, so the stepping is stable.
struct PcfU {
  cplx u, up;
};

inline PcfU pcf_u(cplx a, double t) {
  if (!(t >= 0.0) || t > pcf_max_abs_x)
    throw numeric_error(errc::working_range_exceeded, "pcf_u needs 0 <= t <= 40");
  if (std::abs(a) > 200.0) throw numeric_error(errc::working_range_exceeded, "pcf_u needs |a| <= 200");
  const double T = std::max({12.0, t + 2.0, 1.5 * std::abs(a) + 6.0});
  const cplx ah = a + 0.5;

  // Asymptotic sum and its t-derivative at T, stopped at the smallest term.
  cplx sum = 1.0, dsum = 0.0, term = 1.0;
  double last = 1.0;
  for (int s = 1; s < 400; ++s) {
    term *= -(ah + double(2 * s - 2)) * (ah + double(2 * s - 1)) / (double(s) * 2.0 * T * T);
    const double m = std::abs(term);
    if (m > last) break;
    sum += term;
    dsum += -2.0 * s * term / T;
    last = m;
    if (m < 1e-18 * std::abs(sum)) break;
  }
  // State (w, w') with true value (w, w') e^{scale}.
  double scale = -T * T / 4.0 - ah.real() * std::log(T);
  const cplx phase = std::exp(-I * ah.imag() * std::log(T));
  cplx w = phase * sum;
  cplx wp = w * (-T / 2.0 - ah / T) + phase * dsum;

  std::vector<cplx> c;
  double t0 = T;
  while (t0 > t) {
    const cplx a0 = t0 * t0 / 4.0 + a;
    const double h = std::min({t0 - t, 0.5, 2.0 / (1.0 + std::sqrt(std::abs(a0)))});
    // Taylor coefficients about t0 of w'' = (a0 + (t0/2) s + s^2/4) w, summed at s = -h.
    c.assign({w, wp});
    cplx val = w, der = wp;
    double hn = 1.0;  // h^{m-1}
    int quiet = 0;
    for (int n = 0; n < 600; ++n) {
      c.push_back((a0 * c[n] + (n >= 1 ? (t0 / 2.0) * c[n - 1] : cplx(0.0)) + (n >= 2 ? 0.25 * c[n - 2] : cplx(0.0))) /
                  double((n + 1) * (n + 2)));
      const int m = n + 1;  // adds c_m (-h)^m to the value, m c_m (-h)^{m-1} to the derivative
      if (m >= 2) {
        hn *= h;
        der += double(m) * c[m] * ((m % 2) ? hn : -hn);
      }
      const cplx tv = c[m] * ((m % 2) ? -hn * h : hn * h);
      val += tv;
      if (std::abs(tv) < 1e-18 * std::abs(val) && std::abs(double(m) * c[m]) * hn < 1e-18 * std::abs(der)) {
        if (++quiet > 2) break;
      } else {
        quiet = 0;
      }
    }
    w = val;
    wp = der;
    t0 -= h;
    const double mag = std::abs(w) + std::abs(wp);
    if (mag > 0.0) {
      scale += std::log(mag);
      w /= mag;
      wp /= mag;
    }
  }
  const double e = std::exp(scale);
  return {w * e, wp * e};
}

}  // namespace ptres::specfun
