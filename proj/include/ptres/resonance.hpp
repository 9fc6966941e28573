#pragma once

// Root finding for the pole conditions: argument-principle counting on the
// boundary of a k-rectangle, Newton from grid seeds with deflation, and
// parameter scans with trajectory linking.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ptres/error.hpp"
#include "ptres/residuals.hpp"
#include "ptres/types.hpp"

namespace ptres {

struct SearchRegion {
  double re_lo = 0.0, re_hi = 8.0;
  double im_lo = -3.0, im_hi = 0.5;
  int n_re = 24, n_im = 12;

  void validate() const {
    if (!(re_lo < re_hi) || !(im_lo < im_hi))
      throw numeric_error(errc::invalid_argument, "search region needs lo < hi on both axes");
    if (n_re < 4 || n_im < 4) throw numeric_error(errc::invalid_argument, "search grid must be at least 4x4");
  }

  bool contains(cplx k) const {
    return k.real() >= re_lo && k.real() <= re_hi && k.imag() >= im_lo && k.imag() <= im_hi;
  }

  double diameter() const { return std::hypot(re_hi - re_lo, im_hi - im_lo); }
};

enum class PoleClass { bound, antibound, resonance, virtual_pair_member, unclassified };

inline std::string to_string(PoleClass c) {
  switch (c) {
    case PoleClass::bound: return "bound";
    case PoleClass::antibound: return "antibound";
    case PoleClass::resonance: return "resonance";
    case PoleClass::virtual_pair_member: return "virtual-pair-member";
    case PoleClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

/// Roots closer than this (relative to max(1,|k|)) to the imaginary axis are
/// treated as lying on it.
inline constexpr double axis_tolerance = 1e-7;

inline PoleClass classify(cplx k) {
  const double scale = std::max(1.0, std::abs(k));
  const bool on_axis = std::abs(k.real()) <= axis_tolerance * scale;
  const bool on_real = std::abs(k.imag()) <= axis_tolerance * scale;
  if (on_axis && !on_real) return k.imag() > 0.0 ? PoleClass::bound : PoleClass::antibound;
  if (!on_real && k.imag() < 0.0) return k.real() > 0.0 ? PoleClass::resonance : PoleClass::virtual_pair_member;
  return PoleClass::unclassified;
}

struct ResonancePole {
  cplx k;
  cplx z;  // k^2/2, physical units
  double residual = 0.0;
  int newton_iters = 0;
  PoleClass classification = PoleClass::unclassified;

  SpectralPoint point() const { return {k}; }
  double energy() const { return point().resonance_energy(); }
  double width() const { return point().width(); }
  double lifetime() const { return point().lifetime(); }
};

inline ResonancePole make_pole(cplx k, double residual, int iters) {
  return {k, 0.5 * k * k, residual, iters, classify(k)};
}

struct FindOptions {
  double tol = 1e-10;
  /// Entire function with the residual's zeros, used for counting.  Defaults
  /// to the residual itself, which is correct when it has no poles inside.
  ResidualFn counter;
  /// Tried before the grid seeds (continuation from a neighbouring run).
  std::vector<cplx> seeds;
  int max_refinements = 3;
  int max_newton = 80;
};

namespace detail {

struct Winding {
  double turns = 0.0;
  double min_modulus = 0.0;
};

/// Accumulated arg f along the straight segment [a, b], bisecting wherever
/// the phase moves by more than `max_step` between samples.
inline void phase_walk(const ResidualFn& f, cplx a, cplx fa, cplx b, cplx fb, double& acc, double& min_mod,
                       int depth) {
  const double step = std::arg(fb / fa);
  if (std::abs(step) < 0.3 || depth > 40) {
    if (depth > 40) throw numeric_error(errc::contour_through_zero, "phase of residual unresolved on contour");
    acc += step;
    return;
  }
  const cplx m = 0.5 * (a + b);
  const cplx fm = f(m);
  min_mod = std::min(min_mod, std::abs(fm));
  if (fm == 0.0 || !is_finite(fm))
    throw numeric_error(errc::contour_through_zero, "residual vanishes on the search contour");
  phase_walk(f, a, fa, m, fm, acc, min_mod, depth + 1);
  phase_walk(f, m, fm, b, fb, acc, min_mod, depth + 1);
}

/// `guard` is checked against tol at the base samples (the residual itself,
/// whose scale is meaningful, while `f` may be a rescaled counting function).
inline Winding winding_number(const ResidualFn& f, const ResidualFn& guard, const SearchRegion& r, double tol) {
  const cplx corners[4] = {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo}, {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi}};
  const int per_side = 4 * std::max(r.n_re, r.n_im);
  std::vector<cplx> pts;
  for (int s = 0; s < 4; ++s)
    for (int j = 0; j < per_side; ++j)
      pts.push_back(corners[s] + (corners[(s + 1) % 4] - corners[s]) * (double(j) / per_side));
  Winding w;
  w.min_modulus = std::numeric_limits<double>::infinity();
  std::vector<cplx> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    w.min_modulus = std::min(w.min_modulus, std::abs(vals[i]));
    if (vals[i] == 0.0 || !is_finite(vals[i]))
      throw numeric_error(errc::contour_through_zero, "residual vanishes on the search contour");
    cplx gv;
    try {
      gv = guard(pts[i]);
    } catch (const numeric_error&) {
      continue;  // a pole of the residual, not a zero
    }
    if (std::abs(gv) < tol) throw numeric_error(errc::contour_through_zero, "residual vanishes on the search contour");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::size_t j = (i + 1) % pts.size();
    phase_walk(f, pts[i], vals[i], pts[j], vals[j], acc, w.min_modulus, 0);
  }
  w.turns = acc / (2.0 * pi);
  return w;
}

inline cplx central_derivative(const ResidualFn& f, cplx k) {
  const double h = 1e-7 * std::max(1.0, std::abs(k));
  return (f(k + h) - f(k - h)) / (2.0 * h);
}

struct NewtonResult {
  cplx k;
  int iters = 0;
  bool converged = false;
};

inline NewtonResult deflated_newton(const ResidualFn& f, const std::vector<cplx>& found, cplx k0,
                                    const SearchRegion& r, int max_iter) {
  auto g = [&](cplx k) {
    cplx v = f(k);
    for (const cplx& kf : found) v /= (k - kf);
    return v;
  };
  const double limit = r.diameter();
  const cplx centre{0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi)};
  cplx k = k0;
  for (int it = 1; it <= max_iter; ++it) {
    cplx step;
    try {
      const cplx gk = g(k);
      const cplx d = central_derivative(g, k);
      if (!is_finite(gk) || !is_finite(d) || d == 0.0) return {k, it, false};
      step = gk / d;
    } catch (const numeric_error&) {
      return {k, it, false};
    }
    if (std::abs(step) > 0.25 * limit) step *= 0.25 * limit / std::abs(step);
    k -= step;
    if (std::abs(k - centre) > limit) return {k, it, false};
    if (std::abs(step) <= 1e-13 * std::max(1.0, std::abs(k))) return {k, it, true};
  }
  return {k, max_iter, false};
}

/// A few undeflated steps to remove the deflation bias; returns |f| at the end.
inline double polish(const ResidualFn& f, cplx& k, int& iters) {
  double best = std::abs(f(k));
  for (int i = 0; i < 4; ++i) {
    const cplx d = central_derivative(f, k);
    if (d == 0.0) break;
    const cplx trial = k - f(k) / d;
    const double res = std::abs(f(trial));
    ++iters;
    if (!(res < best)) break;
    best = res;
    k = trial;
  }
  return best;
}

inline std::vector<cplx> grid_seeds(const ResidualFn& counter, const SearchRegion& r, int n_re, int n_im) {
  // Cell centres, local minima of |counter| first.
  std::vector<cplx> pts;
  std::vector<double> mods;
  for (int i = 0; i < n_re; ++i)
    for (int j = 0; j < n_im; ++j) {
      const cplx k{r.re_lo + (i + 0.5) * (r.re_hi - r.re_lo) / n_re, r.im_lo + (j + 0.5) * (r.im_hi - r.im_lo) / n_im};
      pts.push_back(k);
      double m;
      try {
        m = std::abs(counter(k));
      } catch (const numeric_error&) {
        m = std::numeric_limits<double>::infinity();
      }
      mods.push_back(std::isfinite(m) ? m : std::numeric_limits<double>::infinity());
    }
  auto at = [&](int i, int j) { return mods[i * n_im + j]; };
  std::vector<cplx> minima, rest;
  for (int i = 0; i < n_re; ++i)
    for (int j = 0; j < n_im; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && ii < n_re && jj >= 0 && jj < n_im && at(ii, jj) < at(i, j)) {
            is_min = false;
            break;
          }
        }
      (is_min ? minima : rest).push_back(pts[i * n_im + j]);
    }
  minima.insert(minima.end(), rest.begin(), rest.end());
  return minima;
}

}  // namespace detail

/// Winding number of `f` around the boundary of `region`, rounded; throws
/// ContourThroughZero if the boundary passes through (or within tol of) a zero.
inline int count_roots(const ResidualFn& f, const SearchRegion& region, double tol = 1e-10,
                       const ResidualFn& guard = {}) {
  region.validate();
  const auto w = detail::winding_number(f, guard ? guard : f, region, tol);
  const double n = std::round(w.turns);
  if (std::abs(w.turns - n) > 1e-3)
    throw numeric_error(errc::contour_through_zero, "winding number is not an integer");
  return static_cast<int>(n);
}

/// All simple roots of `residual` inside `region`, sorted by (re k, im k).
inline std::vector<ResonancePole> find_poles(const ResidualFn& residual, const SearchRegion& region,
                                             const FindOptions& opt = {}) {
  region.validate();
  const ResidualFn& counter = opt.counter ? opt.counter : residual;
  const int expected = count_roots(counter, region, opt.tol, residual);
  if (expected < 0)
    throw numeric_error(errc::count_mismatch, "negative winding number: counting function has poles in the region");

  std::vector<cplx> found;
  std::vector<ResonancePole> poles;
  // Newton runs on the counting function: it has the same zeros but none of
  // the residual's poles, which otherwise throw iterates around.
  auto try_seed = [&](cplx seed) {
    auto nr = detail::deflated_newton(counter, found, seed, region, opt.max_newton);
    if (!nr.converged) return;
    cplx k = nr.k;
    int iters = nr.iters;
    double res;
    bool located = false;
    try {
      detail::polish(counter, k, iters);
      res = std::abs(residual(k));
      // Next to a pole of the residual |F| stays large even at the exact root;
      // there the root counts as found once the counter pins it down to tol.
      if (!(res <= opt.tol) && opt.counter && std::isfinite(res)) {
        const cplx d = detail::central_derivative(counter, k);
        located = d != 0.0 && std::abs(counter(k) / d) <= opt.tol * std::max(1.0, std::abs(k));
        // ...and |F| must actually dip there: a zero of the counter that F
        // lacks leaves |F| flat on a small circle around it.
        const double rho = 1e-4 * std::max(1.0, std::abs(k));
        for (int q = 0; q < 4 && located; ++q) {
          const double near = std::abs(residual(k + rho * std::polar(1.0, 0.5 * pi * q + 0.3)));
          located = res <= 1e-3 * near;
        }
      }
    } catch (const numeric_error&) {
      return;
    }
    if (!region.contains(k) || !(res <= opt.tol || located)) return;
    for (const cplx& kf : found)
      if (std::abs(k - kf) < 1e-9 * std::max(1.0, std::abs(k))) return;
    found.push_back(k);
    poles.push_back(make_pole(k, res, iters));
  };

  for (const cplx& s : opt.seeds) {
    if (static_cast<int>(found.size()) >= expected) break;
    try_seed(s);
  }
  int n_re = region.n_re, n_im = region.n_im;
  for (int level = 0; level <= opt.max_refinements && static_cast<int>(found.size()) < expected; ++level) {
    for (const cplx& s : detail::grid_seeds(counter, region, n_re, n_im)) {
      if (static_cast<int>(found.size()) >= expected) break;
      try_seed(s);
    }
    n_re *= 2;
    n_im *= 2;
  }
  if (static_cast<int>(found.size()) != expected)
    throw numeric_error(errc::count_mismatch, "Newton found " + std::to_string(found.size()) + " roots, contour count is " +
                                                  std::to_string(expected) + "; refine or split the region");

  std::sort(poles.begin(), poles.end(), [](const ResonancePole& x, const ResonancePole& y) {
    return x.k.real() != y.k.real() ? x.k.real() < y.k.real() : x.k.imag() < y.k.imag();
  });
  return poles;
}

inline std::vector<ResonancePole> find_poles(const ResidualFn& residual, const SearchRegion& region, double tol) {
  FindOptions opt;
  opt.tol = tol;
  return find_poles(residual, region, opt);
}

/// Poles of one model in physical k.
inline std::vector<ResonancePole> model_poles(const ModelKind& kind, const PointInteraction& pint,
                                              const SearchRegion& region, double tol = 1e-10,
                                              std::vector<cplx> seeds = {}) {
  FindOptions opt;
  opt.tol = tol;
  opt.counter = model_counting_function(kind, pint);
  opt.seeds = std::move(seeds);
  return find_poles(model_residual(kind, pint), region, opt);
}

// ---------------------------------------------------------------- scans

struct ScanGrid {
  std::vector<double> a, b, zeta;

  void validate() const {
    if (a.empty() || b.empty() || zeta.empty())
      throw numeric_error(errc::invalid_argument, "scan grid axes must be nonempty");
  }
  std::size_t size() const { return a.size() * b.size() * zeta.size(); }
};

enum class VertexStatus { ok, singular_b, failed };

struct ScanVertex {
  double a = 0.0, b = 0.0, zeta = 0.5;
  VertexStatus status = VertexStatus::ok;
  std::string error;  // error name (e.g. CountMismatch) when failed
  std::vector<ResonancePole> poles;
  std::vector<int> track;  // trajectory id per pole
};

struct PoleTrajectorySet {
  std::vector<ScanVertex> vertices;  // a outermost, then zeta, then b
};

inline std::string status_name(const ScanVertex& v) {
  switch (v.status) {
    case VertexStatus::ok: return "OK";
    case VertexStatus::singular_b: return "SINGULAR_B";
    case VertexStatus::failed: return v.error;
  }
  return v.error;
}

/// b = +-1/(2 zeta) (the matching matrix blows up) or 1 + 2b + 4 zeta eta b^2 = 0.
inline bool is_singular_b(double b, double zeta) {
  const double eta = 1.0 - zeta;
  return std::abs(1.0 - 2.0 * b * zeta) < 1e-13 || std::abs(1.0 + 2.0 * b * zeta) < 1e-13 ||
         std::abs(1.0 + 2.0 * b + 4.0 * zeta * eta * b * b) < 1e-13;
}

namespace detail {

/// Greedy nearest-neighbour assignment of `next` poles to the tracks of `prev`.
inline void link_tracks(const ScanVertex& prev, ScanVertex& next, int& next_id) {
  next.track.assign(next.poles.size(), -1);
  struct Pair {
    double d;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < prev.poles.size(); ++i)
    for (std::size_t j = 0; j < next.poles.size(); ++j)
      pairs.push_back({std::abs(prev.poles[i].k - next.poles[j].k), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
    return x.d != y.d ? x.d < y.d : (x.i != y.i ? x.i < y.i : x.j < y.j);
  });
  std::vector<bool> used(prev.poles.size(), false);
  for (const auto& p : pairs) {
    if (used[p.i] || next.track[p.j] >= 0) continue;
    used[p.i] = true;
    next.track[p.j] = prev.track[p.i];
  }
  for (int& t : next.track)
    if (t < 0) t = next_id++;
}

}  // namespace detail

struct ScanOptions {
  double tol = 1e-10;
  unsigned workers = 0;  // 0: hardware concurrency
  /// Called from worker threads after each b-line completes (e.g. checkpointing);
  /// receives the line index and its vertices.  Must be thread-safe.
  std::function<void(std::size_t, const std::vector<ScanVertex>&)> on_line;
  /// Lines already available (from a checkpoint), indexed by line; empty
  /// entries are computed.
  std::vector<std::vector<ScanVertex>> preset;
};

/// Index of the b-line for (a index, zeta index).
inline std::size_t scan_line_index(const ScanGrid& g, std::size_t ia, std::size_t iz) { return ia * g.zeta.size() + iz; }

/// Poles at every grid vertex.  Each line of constant (a, zeta) is solved
/// sequentially in b, seeding Newton with the previous vertex's roots; lines
/// are distributed over threads and merged in grid order, so the result does
/// not depend on the number of workers.
inline PoleTrajectorySet scan_parameters(const ModelKind& kind, const ScanGrid& grid, const SearchRegion& region,
                                         const ScanOptions& opt = {}) {
  grid.validate();
  region.validate();
  const std::size_t n_lines = grid.a.size() * grid.zeta.size();
  std::vector<std::vector<ScanVertex>> lines(n_lines);

  auto solve_line = [&](std::size_t line) {
    if (line < opt.preset.size() && !opt.preset[line].empty()) {
      lines[line] = opt.preset[line];
      return;
    }
    const double a = grid.a[line / grid.zeta.size()];
    const double zeta = grid.zeta[line % grid.zeta.size()];
    std::vector<ScanVertex> out;
    std::vector<cplx> seeds;
    for (double b : grid.b) {
      ScanVertex v;
      v.a = a;
      v.b = b;
      v.zeta = zeta;
      if (is_singular_b(b, zeta)) {
        v.status = VertexStatus::singular_b;
      } else {
        try {
          v.poles = model_poles(kind, PointInteraction(a, b, zeta), region, opt.tol, seeds);
          seeds.clear();
          for (const auto& p : v.poles) seeds.push_back(p.k);
        } catch (const numeric_error& e) {
          v.status = VertexStatus::failed;
          v.error = to_string(e.code());
          v.poles.clear();
        }
      }
      out.push_back(std::move(v));
    }
    if (opt.on_line) opt.on_line(line, out);
    lines[line] = std::move(out);
  };

  unsigned workers = opt.workers ? opt.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_lines));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t line = next++; line < n_lines; line = next++) solve_line(line);
    });
  for (auto& t : pool) t.join();

  PoleTrajectorySet set;
  for (auto& line : lines) {
    int next_id = 0;
    const ScanVertex* prev = nullptr;
    for (auto& v : line) {
      if (!prev) {
        v.track.resize(v.poles.size());
        for (auto& t : v.track) t = next_id++;
      } else {
        detail::link_tracks(*prev, v, next_id);
      }
      if (v.status == VertexStatus::ok) prev = &v;
      set.vertices.push_back(v);
    }
  }
  return set;
}

}  // namespace ptres
