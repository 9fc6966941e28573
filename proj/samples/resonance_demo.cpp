// Resonances of the semi-oscillator with a delta + delta' at the origin, and
// how the lowest few move as the delta' strength is switched on.

#include <cmath>
#include <cstdio>

#include "ptres/ptres.hpp"

namespace {
// keeps round-off on the imaginary axis from printing as -0.000000
double clean(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }
}  // namespace

int main() {
  using namespace ptres;
  const SearchRegion region{-0.1, 5.0, -2.0, 0.5, 20, 10};

  for (double b : {0.0, 0.3, 0.6}) {
    const PointInteraction pint(1.0, b);
    std::printf("a = 1, b = %.1f\n", b);
    for (const auto& p : model_poles(SemiOscillator{}, pint, region)) {
      std::printf("  k = %+.10f %+.10fi  E0 = %+.6f  Gamma = %.6f  %s\n", clean(p.k.real()), p.k.imag(), p.energy(), clean(p.width()),
                  to_string(p.classification).c_str());
    }
  }

  // The same point interaction decouples the half-lines at b = 1, zeta = 1/2:
  // both confining potentials then share the single pole k = -i a/2.
  const PointInteraction collapse(-2.0, 1.0);
  for (const ModelKind& kind : {ModelKind{SemiOscillator{}}, make_linear(0.5)}) {
    const auto poles = model_poles(kind, collapse, SearchRegion{-0.5, 3.0, -2.0, 2.0, 16, 16});
    std::printf("%s, a = -2, b = 1:", model_name(kind).c_str());
    for (const auto& p : poles) std::printf("  k = %+.12f %+.12fi (%s)", p.k.real(), p.k.imag(), to_string(p.classification).c_str());
    std::printf("\n");
  }
}
