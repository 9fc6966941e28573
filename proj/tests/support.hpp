#pragma once

// Independent reference computations used only by the tests: plain
// long-double series and derivative-free searches, none of which share code
// with the library's evaluators.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace ptres::ref {

using lcplx = std::complex<long double>;

// Ai, Ai', Bi, Bi' by the Maclaurin series, summed in long double.
inline std::array<lcplx, 4> airy_series_ld(lcplx z) {
  const long double c1 = 0.355028053887817239260063186004183176L;
  const long double c2 = 0.258819403792806798405183560189203963L;
  const long double s3 = 1.732050807568877293527446341505872367L;
  if (z == lcplx(0)) return {c1, -c2, s3 * c1, s3 * c2};
  const lcplx z3 = z * z * z;
  lcplx f = 1, g = z, fp = 0, gp = 1;
  lcplx tf = 1, tg = z;
  for (int k = 0; k < 200; ++k) {
    // f = sum 3^k (1/3)_k z^{3k}/(3k)!, g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
    tf *= z3 / (long double)((3 * k + 2) * (3 * k + 3));
    tg *= z3 / (long double)((3 * k + 3) * (3 * k + 4));
    f += tf;
    g += tg;
    fp += tf * (long double)(3 * k + 3) / z;
    gp += tg * (long double)(3 * k + 4) / z;
    if (std::abs(tf) + std::abs(tg) < 1e-30L * (std::abs(f) + std::abs(g))) break;
  }
  return {c1 * f - c2 * g, c1 * fp - c2 * gp, s3 * (c1 * f + c2 * g), s3 * (c1 * fp + c2 * gp)};
}

// Even/odd solutions of w'' = (x^2/4 + a) w at x, by the power series of the ODE.
inline std::array<lcplx, 4> pcf_series_ld(lcplx a, long double x) {
  auto sum = [&](lcplx c0, lcplx c1) {
    std::vector<lcplx> c{c0, c1};
    lcplx w = 0, wp = 0;
    long double xn = 1;
    for (int n = 0; n < 400; ++n) {
      if (n + 2 >= static_cast<int>(c.size())) {
        const lcplx prev = n >= 2 ? c[n - 2] : lcplx(0);
        c.push_back((a * c[n] + prev / 4.0L) / (long double)((n + 1) * (n + 2)));
      }
      w += c[n] * xn;
      if (n + 1 < static_cast<int>(c.size())) wp += (long double)(n + 1) * c[n + 1] * xn;
      xn *= x;
    }
    return std::pair{w, wp};
  };
  const auto [y1, y1p] = sum(1, 0);
  const auto [y2, y2p] = sum(0, 1);
  return {y1, y1p, y2, y2p};
}

// Derivative-free minimisation of |f| by compass search from k.
inline std::complex<double> compass_min(const std::function<double(std::complex<double>)>& f, std::complex<double> k,
                                        double h) {
  double best = f(k);
  const std::complex<double> dirs[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0.7071, 0.7071}, {-0.7071, 0.7071}, {0.7071, -0.7071}, {-0.7071, -0.7071}};
  while (h > 1e-14 * std::max(1.0, std::abs(k))) {
    bool moved = false;
    for (const auto& d : dirs) {
      const auto trial = k + h * d;
      const double v = f(trial);
      if (v < best) {
        best = v;
        k = trial;
        moved = true;
        break;
      }
    }
    if (!moved) h *= 0.5;
  }
  return k;
}

struct Run {
  int rc = -1;
  std::string out;
};

// Runs a shell command, capturing stdout.
inline Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto e = s.find('\n', pos);
    out.push_back(s.substr(pos, e == std::string::npos ? std::string::npos : e - pos));
    if (e == std::string::npos) break;
    pos = e + 1;
  }
  return out;
}

}  // namespace ptres::ref
