#pragma once

#include <array>
#include <cmath>

#include "ptres/error.hpp"
#include "ptres/types.hpp"

namespace ptres::specfun {

namespace detail {

// Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

/// Gamma for re(z) >= 0.5, computed through its logarithm to keep large
/// arguments away from overflow in the intermediate power.
inline cplx lanczos_gamma(cplx z) {
  z -= 1.0;
  cplx x = lanczos_coef[0];
  for (std::size_t i = 1; i < lanczos_coef.size(); ++i) x += lanczos_coef[i] / (z + static_cast<double>(i));
  const cplx t = z + lanczos_g + 0.5;
  return std::sqrt(2.0 * pi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

/// sin(pi z) with the integer part of re(z) removed exactly, so the zeros at
/// the integers are reproduced without rounding from pi*z.
inline cplx sin_pi(cplx z) {
  const double n = std::round(z.real());
  const cplx f{z.real() - n, z.imag()};
  const cplx s = std::sin(pi * f);
  return std::fmod(std::abs(n), 2.0) == 1.0 ? -s : s;
}

inline bool near_nonpositive_integer(cplx z, double tol) {
  if (z.real() > 0.5) return false;
  const double n = std::round(z.real());
  return std::abs(cplx{z.real() - n, z.imag()}) < tol;
}

}  // namespace detail

/// Complex Gamma function.  Throws PoleOfGamma within 1e-14 of 0, -1, -2, ...
inline cplx gamma(cplx z) {
  if (detail::near_nonpositive_integer(z, 1e-14))
    throw numeric_error(errc::pole_of_gamma, "gamma evaluated at a non-positive integer");
  if (z.real() < 0.5) return pi / (detail::sin_pi(z) * detail::lanczos_gamma(1.0 - z));
  return detail::lanczos_gamma(z);
}

/// 1/Gamma(z); entire, exactly zero at the non-positive integers.
inline cplx rgamma(cplx z) {
  if (detail::near_nonpositive_integer(z, 1e-14)) return 0.0;
  if (z.real() < 0.5) return detail::sin_pi(z) * detail::lanczos_gamma(1.0 - z) / pi;
  return 1.0 / detail::lanczos_gamma(z);
}

/// Gamma((3 - 2 eps)/4) / Gamma((1 - 2 eps)/4).  Exact zero where the
/// denominator has a pole; RatioPole where only the numerator does.
inline cplx g_ratio(cplx eps) {
  const cplx num = (3.0 - 2.0 * eps) / 4.0;
  const cplx den = (1.0 - 2.0 * eps) / 4.0;
  if (detail::near_nonpositive_integer(den, 1e-14)) return 0.0;
  if (detail::near_nonpositive_integer(num, 1e-14))
    throw numeric_error(errc::ratio_pole, "numerator Gamma((3-2eps)/4) is at a pole");
#ifdef PTRES_MUTATE_G_RATIO_SIGN
  // Deliberately wrong build used to check that `ptres verify` notices.
  return -gamma(num) * rgamma(den);
#else
  return gamma(num) * rgamma(den);
#endif
}

}  // namespace ptres::specfun
