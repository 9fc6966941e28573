#pragma once

// Minimal extended-precision complex arithmetic for power series whose
// partial sums cancel heavily (Airy and parabolic cylinder Maclaurin sums).

#include <cmath>
#include <complex>

namespace ptres::specfun::detail {

#if defined(__SIZEOF_FLOAT128__)
using wide = __float128;
#else
using wide = long double;
#endif

struct wcplx {
  wide re = 0;
  wide im = 0;

  wcplx() = default;
  wcplx(wide r, wide i = 0) : re(r), im(i) {}
  explicit wcplx(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> narrow() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  wcplx& operator+=(const wcplx& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  wcplx& operator-=(const wcplx& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  wcplx& operator*=(const wcplx& o) {
    const wide r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  wcplx& operator*=(wide s) {
    re *= s;
    im *= s;
    return *this;
  }
  wcplx& operator/=(wide s) {
    re /= s;
    im /= s;
    return *this;
  }
};

inline wcplx operator+(wcplx a, const wcplx& b) { return a += b; }
inline wcplx operator-(wcplx a, const wcplx& b) { return a -= b; }
inline wcplx operator*(wcplx a, const wcplx& b) { return a *= b; }
inline wcplx operator*(wcplx a, wide s) { return a *= s; }
inline wcplx operator*(wide s, wcplx a) { return a *= s; }
inline wcplx operator/(wcplx a, wide s) { return a /= s; }

/// Cheap magnitude estimate, |re| + |im|, good enough for series cut-offs.
inline wide mag1(const wcplx& z) {
  return (z.re < 0 ? -z.re : z.re) + (z.im < 0 ? -z.im : z.im);
}

}  // namespace ptres::specfun::detail
