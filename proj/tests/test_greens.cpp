#include <gtest/gtest.h>

#include "ptres/ptres.hpp"

using namespace ptres;

namespace {

const ModelKind osc = SemiOscillator{};
const ModelKind lin = make_linear(0.5);

cplx k_of(cplx z) { return SpectralPoint::from_energy(z).k; }

// One-sided second-order derivative of x -> G(x, xp) at x = xp from the given side.
cplx one_sided(const std::function<cplx(double)>& f, double x0, double h) {
  return (-3.0 * f(x0) + 4.0 * f(x0 + h) - f(x0 + 2 * h)) / (2 * h);
}

}  // namespace

TEST(FreeGreen, OscillatorContinuity) {
  const double xp = -0.7, d = 1e-6;
  EXPECT_LT(std::abs(g0_oscillator(xp + d, xp, 1.0) - g0_oscillator(xp - d, xp, 1.0)), 1e-5);
}

TEST(FreeGreen, OscillatorDerivativeJumpByDifferences) {
  const double xp = 0.5, h = 1e-4;
  auto f = [&](double x) { return g0_oscillator(x, xp, 2.0); };
  const cplx right = one_sided(f, xp, h), left = one_sided(f, xp, -h);
  EXPECT_LT(std::abs(right - left + 2.0), 1e-4);
}

TEST(FreeGreen, OscillatorMatchesVariationOfParameters) {
  const cplx z = 1.3;
  EXPECT_LT(std::abs(g0_oscillator(-1.0, -0.5, z) - oracle::vp_green_energy(osc, z, -1.0, -0.5)),
            1e-6 * std::abs(g0_oscillator(-1.0, -0.5, z)));
}

TEST(FreeGreen, LinearContinuityAndJump) {
  const double xp = -0.7, h = 1e-4;
  auto f = [&](double x) { return g0_linear(x, xp, 1.0, 0.5); };
  EXPECT_LT(std::abs(f(xp + 1e-6) - f(xp - 1e-6)), 1e-5);
  EXPECT_LT(std::abs(one_sided(f, xp, h) - one_sided(f, xp, -h) + 2.0), 1e-4);
}

TEST(FreeGreen, LinearDecaysToTheLeft) {
  EXPECT_LT(std::abs(g0_linear(-8.0, -0.5, 1.0, 0.5)), std::abs(g0_linear(-4.0, -0.5, 1.0, 0.5)));
}

TEST(FreeGreen, LinearMatchesVariationOfParameters) {
  const cplx z = 0.9;
  const cplx g = g0_linear(-1.2, 0.4, z, 0.5);
  EXPECT_LT(std::abs(g - oracle::vp_green_energy(lin, z, -1.2, 0.4)), 1e-6 * std::abs(g));
}

TEST(FreeGreen, DefiningPropertiesOnRandomSamples) {
  for (const ModelKind& kind : {osc, lin}) {
    verify::Sampler rng(99);
    for (int i = 0; i < 50; ++i) {
      const auto s = verify::draw_green_sample(rng);
      const auto p = verify::green_properties(kind, s.k, s.xp, s.x_ode);
      EXPECT_LT(p.continuity, 1e-8);
      EXPECT_LT(p.jump, 1e-6);
      EXPECT_LT(p.ode, 1e-5) << model_name(kind) << " k=" << s.k << " x=" << s.x_ode << " xp=" << s.xp;
      EXPECT_LT(p.outgoing, 1e-8);
      EXPECT_TRUE(p.decays);
    }
  }
}

TEST(FreeGreen, OdeResidualOnGrid) {
  for (const ModelKind& kind : {osc, lin})
    for (cplx k : {cplx{1.2, 0.0}, cplx{2.0, -0.4}, cplx{0.7, 0.3}}) {
      const double xp = -0.8;
      for (double x = -4.0; x <= 4.0; x += 0.37) {
        if (std::abs(x - xp) < 0.05 || std::abs(x) < 0.05) continue;
        EXPECT_LT(verify::green_properties(kind, k, xp, x).ode, 1e-5) << model_name(kind) << ' ' << k << ' ' << x;
      }
    }
}

TEST(FreeGreen, SingularEnergyAtFreePole) {
  // a = b = 0 poles are zeros of the Wronskian of G0 itself
  const auto poles = model_poles(osc, PointInteraction(0, 0), SearchRegion{1.5, 3.0, -1.5, -0.1, 8, 8});
  ASSERT_FALSE(poles.empty());
  try {
    FreeGreen(FreeSolutions(osc, poles[0].k));
    FAIL() << "no SingularEnergy";
  } catch (const numeric_error& e) {
    EXPECT_EQ(e.code(), errc::singular_energy);
  }
}

TEST(FreeGreen, SymmetryAuditIsReported) {
  double worst = 0.0;
  for (const ModelKind& kind : {osc, lin}) {
    const FreeGreen g(FreeSolutions(kind, {1.3, -0.2}));
    for (double x : {-2.0, -0.4, 0.3, 1.7})
      for (double xp : {-1.1, 0.6})
        worst = std::max(worst, std::abs(g(x, xp).value - g(xp, x).value) / std::abs(g(x, xp).value));
  }
  RecordProperty("max_asymmetry", std::to_string(worst));
  EXPECT_TRUE(std::isfinite(worst));
}

TEST(CornerData, OscillatorJumpAtOne) {
  const auto cd = corner_data(osc, k_of(1.0));
  EXPECT_LT(std::abs(cd.g1_0p - cd.g1_0m + 2.0), 1e-12);
  EXPECT_LT(std::abs(cd.g2_0p - cd.g2_0m - 2.0), 1e-12);
}

TEST(CornerData, ValuesMatchNumericalLimits) {
  for (const ModelKind& kind : {osc, lin}) {
    const cplx k{1.4, -0.3};
    const auto cd = corner_data(kind, k);
    const FreeGreen g(FreeSolutions(kind, k));
    const double d = 1e-6;
    EXPECT_LT(std::abs(g(d, 0.0).value - cd.g00), 1e-5);
    EXPECT_LT(std::abs(g(-d, 0.0).value - cd.g00), 1e-5);
    // one-sided limits: central differences at offsets s and 2s, extrapolated linearly to 0
    auto dx = [&](double x, double xp) { return (g(x + 1e-6, xp).value - g(x - 1e-6, xp).value) / 2e-6; };
    auto dxp = [&](double x, double xp) { return (g(x, xp + 1e-6).value - g(x, xp - 1e-6).value) / 2e-6; };
    const double s = 1e-4;
    EXPECT_LT(std::abs(2.0 * dx(s, 0.0) - dx(2 * s, 0.0) - cd.g1_0p), 1e-5);
    EXPECT_LT(std::abs(2.0 * dx(-s, 0.0) - dx(-2 * s, 0.0) - cd.g1_0m), 1e-5);
    EXPECT_LT(std::abs(2.0 * dxp(s, 0.0) - dxp(2 * s, 0.0) - cd.g2_0p), 1e-5);
    EXPECT_LT(std::abs(2.0 * dxp(-s, 0.0) - dxp(-2 * s, 0.0) - cd.g2_0m), 1e-5);
  }
}

TEST(CornerData, LinearJumpAtPointNine) {
  const auto cd = corner_data(lin, k_of(0.9));
  EXPECT_LT(std::abs(cd.g2_0p - cd.g2_0m - 2.0), 1e-9);
  EXPECT_LT(std::abs(cd.g1_0p - cd.g1_0m + 2.0), 1e-9);
}

TEST(CornerData, JumpsOnBothSheets) {
  verify::Sampler rng(3);
  EXPECT_LT(verify::corner_jumps(osc, rng, 50), 1e-9);
  EXPECT_LT(verify::corner_jumps(lin, rng, 50), 1e-9);
}

TEST(Coefficients, UnperturbedLimit) {
  const auto c = coefficient_set(corner_data(osc, {1.1, -0.2}), PointInteraction(0, 0));
  EXPECT_EQ(c.A, cplx(1.0));
  EXPECT_EQ(c.E, cplx(1.0));
  for (cplx v : {c.B, c.C, c.D, c.F, c.lambda1, c.lambda2, c.alpha1, c.alpha2, c.alpha3}) EXPECT_EQ(std::abs(v), 0.0);
  EXPECT_EQ(c.Delta, cplx(1.0));
  EXPECT_EQ(c.lambda, cplx(1.0));
}

TEST(Coefficients, DeltaOnlyReduction) {
  const double a = 0.8;
  const auto cd = corner_data(lin, {1.3, -0.1});
  const auto c = coefficient_set(cd, PointInteraction(a, 0.0, 0.3));
  EXPECT_LT(std::abs(c.C + a * cd.g1_0p), 1e-15);
  EXPECT_LT(std::abs(c.F + a * cd.g1_0m), 1e-15);
  EXPECT_EQ(c.Delta, cplx(1.0));
  EXPECT_LT(std::abs(c.lambda - (1.0 + a * cd.g00)), 1e-14);
}

TEST(Coefficients, DeltaMatchesDefinition) {
  const PointInteraction pint(1.0, 0.3, 0.5);
  const auto cd = corner_data(osc, {2.0, -0.5});
  const auto c = coefficient_set(cd, pint);
  EXPECT_LT(std::abs(c.Delta - (1.0 - 0.3 * (0.5 * cd.g1_0p + 0.5 * cd.g1_0m))), 1e-12);
}

TEST(Coefficients, LambdaAgainstIndependentClosure) {
  // Solving the x -> 0+- limits of the Dyson relation for (S, S') directly
  // gives det = (1 + a g00 - b G2)(1 - b G1) + b g00 (a G1 - b G12); lambda
  // must equal det / Delta.
  for (const ModelKind& kind : {osc, lin})
    for (const PointInteraction& pint : {PointInteraction(1.0, 0.3, 0.5), PointInteraction(-0.4, 0.7, 0.2)}) {
      const cplx k{1.7, -0.35};
      const auto cd = corner_data(kind, k);
      const double a = pint.a(), b = pint.b(), ze = pint.zeta(), et = pint.eta();
      const cplx g1 = ze * cd.g1_0p + et * cd.g1_0m, g2 = ze * cd.g2_0p + et * cd.g2_0m;
      const cplx g12 = ze * cd.g12_pp + et * cd.g12_mm;
      const cplx det = (1.0 + a * cd.g00 - b * g2) * (1.0 - b * g1) + b * cd.g00 * (a * g1 - b * g12);
      const auto c = coefficient_set(cd, pint);
      EXPECT_LT(std::abs(c.lambda - det / c.Delta), 1e-12 * std::abs(c.lambda)) << model_name(kind);
    }
}

TEST(Coefficients, LambdaVanishesAtPoles) {
  const PointInteraction pint(1.0, 0.3, 0.5);
  for (const ModelKind& kind : {osc, lin}) {
    const auto poles = model_poles(kind, pint, SearchRegion{0.5, 3.0, -1.0, -0.01, 12, 8});
    ASSERT_FALSE(poles.empty());
    for (const auto& p : poles) {
      const auto c = coefficient_set(corner_data(kind, p.k), pint);
      EXPECT_LT(std::abs(c.lambda), 1e-8) << model_name(kind) << ' ' << p.k;
      // and it does not vanish nearby
      const auto c2 = coefficient_set(corner_data(kind, p.k + 0.05), pint);
      EXPECT_GT(std::abs(c2.lambda), 1e-4);
    }
  }
}

TEST(Coefficients, DegenerateDelta) {
  // b g1z = 1 makes Delta vanish.  Below the continuum (k on the positive
  // imaginary axis) the corner data is real, so a real b does it.
  for (const ModelKind& kind : {osc, lin}) {
    const auto cd = corner_data(kind, {0.0, 0.8});
    const cplx g1z = 0.5 * cd.g1_0p + 0.5 * cd.g1_0m;
    ASSERT_LT(std::abs(g1z.imag()), 1e-12 * std::abs(g1z));
    try {
      coefficient_set(cd, PointInteraction(0.0, 1.0 / g1z.real(), 0.5));
      FAIL() << model_name(kind);
    } catch (const numeric_error& e) {
      EXPECT_EQ(e.code(), errc::degenerate_delta);
    }
  }
}

TEST(FullGreen, UnperturbedLimitEqualsG0) {
  verify::Sampler rng(21);
  for (const ModelKind& kind : {osc, lin})
    for (int i = 0; i < 20; ++i) {
      const cplx k{rng.uniform(0.4, 3.0), rng.uniform(-0.6, 0.4)};
      const double x = rng.uniform(-3, 3), xp = rng.uniform(-3, 3);
      const cplx g = full_green(kind, PointInteraction(0, 0), x, xp, k);
      const cplx g0 = FreeGreen(FreeSolutions(kind, k))(x, xp).value;
      EXPECT_LT(std::abs(g - g0), 1e-12 * std::max(1.0, std::abs(g0)));
    }
}

TEST(FullGreen, JumpAtSourceWithPointInteraction) {
  const PointInteraction pint(1.0, 0.2, 0.5);
  for (const ModelKind& kind : {osc, lin}) {
    const PerturbedGreen g(kind, pint, {1.5, -0.2});
    const auto up = g(-0.3, -0.3, Side::plus), dn = g(-0.3, -0.3, Side::minus);
    EXPECT_LT(std::abs(up.value - dn.value), 1e-12);
    EXPECT_LT(std::abs(up.dx - dn.dx + 2.0), 1e-10);
    // and by finite differences of the value
    const double h = 1e-4;
    auto f = [&](double x) { return g(x, -0.3).value; };
    EXPECT_LT(std::abs(one_sided(f, -0.3, h) - one_sided(f, -0.3, -h) + 2.0), 1e-4);
  }
}

TEST(FullGreen, SatisfiesMatchingConditions) {
  for (const ModelKind& kind : {osc, lin})
    for (double xp : {-0.9, 0.7})
      EXPECT_LT(verify::perturbed_consistency(kind, PointInteraction(0.6, -0.35, 0.3), {1.1, -0.25}, xp), 1e-9);
}

TEST(FullGreen, ResidueAtPoleIsFiniteAndNonzero) {
  const PointInteraction pint(1.0, 0.3, 0.5);
  const auto poles = model_poles(osc, pint, SearchRegion{1.0, 3.0, -1.0, -0.01, 12, 8});
  ASSERT_FALSE(poles.empty());
  const cplx k0 = poles[0].k;
  auto r = [&](double rho) {
    cplx s = 0;
    for (int j = 0; j < 4; ++j) {
      const cplx k = k0 + rho * std::polar(1.0, pi / 4 + j * pi / 2);
      const cplx z = 0.5 * k * k, z0 = 0.5 * k0 * k0;
      s += (z - z0) * full_green(osc, pint, -0.5, -1.0, k);
    }
    return s / 4.0;
  };
  const cplx r1 = r(1e-3), r2 = r(5e-4);
  const cplx lim = (4.0 * r2 - r1) / 3.0;
  EXPECT_GT(std::abs(lim), 1e-6);
  EXPECT_LT(std::abs(r2 - r1), 1e-2 * std::abs(lim));
  try {
    full_green(osc, pint, -0.5, -1.0, k0);
    FAIL() << "no PoleOfGreen at a located pole";
  } catch (const numeric_error& e) {
    EXPECT_EQ(e.code(), errc::pole_of_green);
  }
}
