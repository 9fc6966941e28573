#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <variant>

#include "ptres/error.hpp"

namespace ptres {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Energy-like quantities attached to a complex momentum.  With hbar = m = 1
/// the free region x > 0 gives z = k^2/2 for both confining models, so the
/// momentum is the primary coordinate and everything else derives from it.
struct SpectralPoint {
  cplx k;

  static SpectralPoint from_energy(cplx z) { return {std::sqrt(2.0 * z)}; }

  cplx energy() const { return 0.5 * k * k; }
  double resonance_energy() const { return energy().real(); }
  double width() const { return -2.0 * energy().imag(); }
  double lifetime() const {
    const double gamma = width();
    return gamma > 0.0 ? 1.0 / gamma : std::numeric_limits<double>::infinity();
  }
};

/// a*delta(x) + b*delta'(x) with Zolotaryuk weights zeta + eta = 1.
class PointInteraction {
 public:
  PointInteraction() = default;

  PointInteraction(double a, double b, double zeta = 0.5) : a_(a), b_(b), zeta_(zeta), eta_(1.0 - zeta) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(zeta))
      throw numeric_error(errc::invalid_argument, "point interaction parameters must be finite");
    if (zeta < 0.0 || zeta > 1.0)
      throw numeric_error(errc::invalid_argument, "zeta must lie in [0, 1]");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double zeta() const { return zeta_; }
  double eta() const { return eta_; }

  /// (1 + 2b zeta)(1 + 2b eta) = 1 + 2b + 4 zeta eta b^2
  double plus_factor() const { return 1.0 + 2.0 * b_ + 4.0 * zeta_ * eta_ * b_ * b_; }
  /// (1 - 2b zeta)(1 - 2b eta) = 1 - 2b + 4 zeta eta b^2
  double minus_factor() const { return 1.0 - 2.0 * b_ + 4.0 * zeta_ * eta_ * b_ * b_; }

 private:
  double a_ = 0.0;
  double b_ = 0.0;
  double zeta_ = 0.5;
  double eta_ = 0.5;
};

/// x^2/2 for x < 0, free for x > 0.
struct SemiOscillator {};

/// -F x for x < 0 (a confining ramp), free for x > 0.
struct SemiLinear {
  double field = 0.5;

  /// Length unit of the Airy scaling, x = scale * xi.
  double scale() const { return std::cbrt(1.0 / (2.0 * field)); }
};

using ModelKind = std::variant<SemiOscillator, SemiLinear>;

inline ModelKind make_linear(double field) {
  if (!(field > 0.0) || !std::isfinite(field))
    throw numeric_error(errc::invalid_argument, "linear model needs F > 0");
  return SemiLinear{field};
}

inline std::string model_name(const ModelKind& kind) {
  return std::holds_alternative<SemiOscillator>(kind) ? "oscillator" : "linear";
}

/// Potential of the confining half-line, evaluated anywhere on the real line.
inline double left_potential(const ModelKind& kind, double x) {
  if (x >= 0.0) return 0.0;
  if (std::holds_alternative<SemiOscillator>(kind)) return 0.5 * x * x;
  return -std::get<SemiLinear>(kind).field * x;
}

}  // namespace ptres
