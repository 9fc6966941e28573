// One PASS/FAIL line per acceptance criterion.  Exit status is nonzero when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "ptres/ptres.hpp"
#include "../support.hpp"

using namespace ptres;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const ModelKind osc = SemiOscillator{};
const ModelKind lin = make_linear(0.5);

Outcome green_properties() {
  double cont = 0, jump = 0, ode = 0, out = 0;
  bool decays = true;
  for (const ModelKind& kind : {osc, lin}) {
    verify::Sampler rng(2024);
    for (int i = 0; i < 50; ++i) {
      const auto s = verify::draw_green_sample(rng);
      const auto p = verify::green_properties(kind, s.k, s.xp, s.x_ode);
      cont = std::max(cont, p.continuity);
      jump = std::max(jump, p.jump);
      ode = std::max(ode, p.ode);
      out = std::max(out, p.outgoing);
      decays = decays && p.decays;
    }
  }
  const bool ok = cont <= 1e-8 && jump <= 1e-6 && ode <= 1e-5 && out <= 1e-8 && decays;
  return {ok, "continuity " + fmt(cont) + ", jump " + fmt(jump) + ", ODE " + fmt(ode) + ", outgoing " + fmt(out) +
                  (decays ? ", decaying" : ", NOT decaying")};
}

Outcome oracle_equivalence() {
  double vp = 0, real = 0, cx = 0;
  verify::Sampler rng(77);
  for (const ModelKind& kind : {osc, lin}) {
    vp = std::max(vp, verify::oracle_green(kind, rng, 30));
    const auto es = verify::logderiv_energies(kind, 20, 10);
    if (es.size() != 30) return {false, "could not draw 30 energies"};
    real = std::max(real, verify::oracle_logderiv(kind, {es.begin(), es.begin() + 20}));
    cx = std::max(cx, verify::oracle_logderiv(kind, {es.begin() + 20, es.end()}));
  }
  return {vp <= 1e-6 && real <= 1e-6 && cx <= 1e-5,
          "G0 vs VP " + fmt(vp) + ", log-derivative real " + fmt(real) + ", complex " + fmt(cx)};
}

Outcome matching_identity() {
  double worst = 0;
  verify::Sampler rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = rng.uniform(-5, 5), b = rng.uniform(-0.99, 0.99);
    const auto k = kurasov_matrix(a, b);
    const auto m = matching_matrix(PointInteraction(a, b, 0.5));
    for (auto [x, y] : {std::pair{k.m11, m.m11}, {k.m12, m.m12}, {k.m21, m.m21}, {k.m22, m.m22}})
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(x)));
  }
  // The singular relations: one half-line carries psi(0) = 0, the other
  // psi' = +-(a/2) psi.  The b -> -1 limit of the matching system gives
  // psi(0+) = 0, psi'(0-) = -(a/2) psi(0-); b -> +1 the mirror image.
  bool singular = true;
  for (double a : {0.0, 1.3, -2.0}) {
    const SingularConstraints minus(PointInteraction(a, -1.0, 0.5)), plus(PointInteraction(a, 1.0, 0.5));
    singular = singular && minus.satisfied({1.0, -a / 2}, {0.0, 0.7}) && !minus.satisfied({1.0, -a / 2}, {0.1, 0.7}) &&
               !minus.satisfied({1.0, a / 2 + 1}, {0.0, 0.7});
    singular = singular && plus.satisfied({0.0, 0.7}, {1.0, a / 2}) && !plus.satisfied({0.1, 0.7}, {1.0, a / 2}) &&
               !plus.satisfied({0.0, 0.7}, {1.0, -a / 2 - 1});
  }
  // and the state at the collapse pole obeys them
  const PointInteraction collapse(-2.0, 1.0, 0.5);
  const auto poles = model_poles(osc, collapse, SearchRegion{-0.5, 3, -2, 2, 16, 16});
  const bool residue_ok = poles.size() == 1 &&
                          SingularConstraints(collapse).satisfied(residue_wavefunction(osc, collapse, poles[0], {}).minus,
                                                                  residue_wavefunction(osc, collapse, poles[0], {}).plus, 1e-8);
  return {worst <= 1e-14 && singular && residue_ok,
          "max |Kurasov - matching| " + fmt(worst) + ", singular relations " + (singular ? "ok" : "WRONG") +
              " (b=-1: psi(0+)=0, psi'(0-)=-(a/2)psi(0-); b=+1 mirrored), collapse state " + (residue_ok ? "ok" : "WRONG")};
}

Outcome solver_completeness() {
  const SearchRegion r = verify::reference_region();
  const PointInteraction pint(0, 0);
  const auto poles = model_poles(osc, pint, r);
  const int winding = count_roots(model_counting_function(osc, pint), r);

  const auto f = [&](cplx k) { return std::abs(residual_oscillator(k, pint)); };
  const int n = 400;
  auto at = [&](int i, int j) {
    return cplx{r.re_lo + (r.re_hi - r.re_lo) * i / (n - 1), r.im_lo + (r.im_hi - r.im_lo) * j / (n - 1)};
  };
  std::vector<double> v(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i * n + j] = f(at(i, j));
  std::vector<cplx> minima;
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 1; j + 1 < n; ++j) {
      const double c = v[i * n + j];
      bool is_min = c < 0.05;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if ((di || dj) && v[(i + di) * n + j + dj] < c) is_min = false;
      if (!is_min) continue;
      const cplx k = ref::compass_min(f, at(i, j), 0.02);
      if (f(k) < 1e-10 && r.contains(k)) minima.push_back(k);
    }
  double worst = 0;
  for (const auto& p : poles) {
    double best = 1e300;
    for (const cplx& m : minima) best = std::min(best, std::abs(m - p.k));
    worst = std::max(worst, best);
  }
  const bool ok = static_cast<int>(poles.size()) == winding && minima.size() == poles.size() && worst <= 1e-8;
  return {ok, std::to_string(poles.size()) + " roots, winding " + std::to_string(winding) + ", " +
                  std::to_string(minima.size()) + " grid minima, max distance " + fmt(worst)};
}

Outcome collapse_point() {
  const PointInteraction pint(-2.0, 1.0, 0.5);
  const SearchRegion r{-0.5, 3, -2, 2, 16, 16};
  const auto po = model_poles(osc, pint, r);
  const auto pl = model_poles(lin, pint, r);
  if (po.size() != 1 || pl.size() != 1)
    return {false, "pole counts " + std::to_string(po.size()) + " / " + std::to_string(pl.size())};
  const double d_model = std::abs(po[0].k - pl[0].k), d_exact = std::abs(po[0].k - I);
  const bool ok = d_model <= 1e-10 && d_exact <= 1e-10 && po[0].classification == PoleClass::bound;
  return {ok, "k = " + fmt(po[0].k.real()) + (po[0].k.imag() < 0 ? " - " : " + ") + fmt(std::abs(po[0].k.imag())) +
                  "i (" + to_string(po[0].classification) + "), |k - i| " + fmt(d_exact) + ", |osc - lin| " + fmt(d_model)};
}

Outcome semi_transparency() {
  std::vector<double> T;
  double lowest = 1e300;
  for (int i = 0; i < 199; ++i) {
    const double b = -0.98 + 1.96 * i / 198.0;
    T.push_back(transmission(1.0, PointInteraction(0.0, b, 0.5)).T);
    lowest = std::min(lowest, T.back());
  }
  bool monotone = true;
  for (int i = 194; i < 198; ++i) monotone = monotone && T[i + 1] < T[i];
  for (int i = 0; i < 4; ++i) monotone = monotone && T[i] < T[i + 1];
  return {lowest > 1e-6 && monotone,
          "min T " + fmt(lowest) + ", decreasing towards b = +-1: " + (monotone ? "yes" : "NO")};
}

Outcome residue_matching() {
  const PointInteraction pint(1.0, 0.3, 0.5);
  const auto m = matching_matrix(pint);
  const auto poles = model_poles(osc, pint, SearchRegion{0.5, 4, -1.5, -0.01, 16, 8});
  if (poles.size() < 3) return {false, "fewer than 3 poles"};
  double ratio = 0, deriv = 0, ode = 0;
  const double x = 1.0, h = 1e-2;
  for (int i = 0; i < 3; ++i) {
    const auto w = residue_wavefunction(osc, pint, poles[i], {x - 2 * h, x - h, x, x + h, x + 2 * h});
    ratio = std::max(ratio, std::abs(w.plus.psi / w.minus.psi - m.m11));
    deriv = std::max(deriv, std::abs(w.plus.psip - (m.m21 * w.minus.psi + m.m22 * w.minus.psip)) /
                                std::max(1.0, std::abs(w.plus.psip)));
    const auto& v = w.values;
    const cplx d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12 * h * h);
    ode = std::max(ode, std::abs(d2 + 2.0 * poles[i].z * v[2]) / std::abs(d2));
  }
  return {ratio <= 1e-5 && deriv <= 1e-5 && ode <= 1e-5,
          "psi(0+)/psi(0-) - m11 " + fmt(ratio) + ", psi' relation " + fmt(deriv) + ", free-side ODE " + fmt(ode)};
}

Outcome verify_cli() {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "ptres_acceptance";
  fs::create_directories(dir);
  const std::string a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const auto t0 = std::chrono::steady_clock::now();
  const auto ra = ref::run(std::string(PTRES_CLI) + " verify --fast --out " + a + " 2>/dev/null");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto rb = ref::run(std::string(PTRES_CLI) + " verify --fast --out " + b + " 2>/dev/null");
  auto slurp = [](const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  const std::string ca = slurp(a), cb = slurp(b);
  const bool same = !ca.empty() && ca == cb;
  return {ra.rc == 0 && rb.rc == 0 && same && secs < 60,
          "exit " + std::to_string(ra.rc) + "/" + std::to_string(rb.rc) + ", " + fmt(secs) + " s, CSV " +
              (same ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* what;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "G0 defining properties", 30, green_properties},
      {2, "oracle equivalence", 120, oracle_equivalence},
      {3, "matching-matrix identity", 0, matching_identity},
      {4, "pole-solver completeness", 60, solver_completeness},
      {5, "algebraic collapse point", 0, collapse_point},
      {6, "semi-transparency", 5, semi_transparency},
      {7, "residue-matching consistency", 0, residue_matching},
      {8, "verify --fast end-to-end", 0, verify_cli},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += ", over the " + fmt(c.budget_s) + " s budget";
    }
    failed += !o.pass;
    std::printf("criterion %d %-30s %s  %s [%.2f s]\n", c.id, c.what, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
  }
  std::fflush(stdout);
  return failed ? 1 : 0;
}
