// ptres: pole tables, parameter scans, Green's function samples, matching
// matrices, transmission curves and the self-check suite.
//
// Exit codes: 0 success, 1 verify found a failing check, 2 numerical failure
// (CountMismatch, ContourThroughZero, PoleOfGreen, ...), 3 invalid parameters.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <iostream>
#include <mutex>
#include <sstream>

#include "ptres/ptres.hpp"

namespace {

using namespace ptres;
using io::Cell;
using io::Table;

struct invalid_input : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& s, std::size_t expect, const char* what) {
  std::vector<double> out;
  for (const auto& f : io::split_csv_line(s)) {
    try {
      out.push_back(io::parse_double(f));
    } catch (const std::exception&) {
      throw invalid_input(std::string("cannot parse ") + what + ": '" + s + "'");
    }
  }
  if (expect && out.size() != expect)
    throw invalid_input(std::string(what) + " needs " + std::to_string(expect) + " comma-separated numbers");
  return out;
}

// "lo:hi:n" (inclusive, n points), "v1,v2,..." or a single value.
std::vector<double> parse_grid(const std::string& s, const char* what) {
  if (s.find(':') == std::string::npos) return parse_list(s, 0, what);
  std::vector<double> p;
  std::stringstream ss(s);
  for (std::string f; std::getline(ss, f, ':');) p.push_back(parse_list(f, 1, what)[0]);
  if (p.size() != 3 || p[2] < 1 || p[2] != std::floor(p[2]))
    throw invalid_input(std::string(what) + ": range form is lo:hi:n");
  const int n = static_cast<int>(p[2]);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? p[0] : p[0] + (p[1] - p[0]) * i / (n - 1);
  return out;
}

cplx parse_complex(const std::string& s, const char* what) {
  const auto v = parse_list(s, 0, what);
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw invalid_input(std::string(what) + " is re or re,im");
}

struct Options {
  std::string model = "oscillator";
  double F = 0.5, a = 0.0, b = 0.0, zeta = 0.5;
  std::string region = "-0.1,8,-3,0.5";
  std::string grid = "24,12";
  double tol = 1e-10;
  std::string out = "-";
  std::string format = "csv";
  std::string plot;
  // scan
  std::string a_grid, b_grid, zeta_grid, checkpoint;
  unsigned workers = 0;
  // green / wavefunction / transmission
  std::string x_grid = "-3:3:61";
  double xp = 0.5;
  std::string k = "1,-0.5";
  std::string k_grid = "1";
  int pole = 0;
  // verify
  bool fast = false, full = false;

  ModelKind kind() const {
    if (model == "oscillator") return SemiOscillator{};
    if (model == "linear") return make_linear(F);
    throw invalid_input("--model must be oscillator or linear");
  }
  PointInteraction pint() const { return PointInteraction(a, b, zeta); }
  SearchRegion search_region() const {
    const auto r = parse_list(region, 4, "--region");
    const auto g = parse_list(grid, 2, "--grid");
    SearchRegion out{r[0], r[1], r[2], r[3], static_cast<int>(g[0]), static_cast<int>(g[1])};
    out.validate();
    return out;
  }
};

// ------------------------------------------------------------------ output

void emit(const Options& o, const Table& t) {
  std::ofstream file;
  if (o.out != "-") {
    file.open(o.out, std::ios::binary);
    if (!file) throw invalid_input("cannot open " + o.out);
  }
  std::ostream& os = o.out == "-" ? std::cout : file;
  if (o.format == "csv") {
    io::write_csv(os, t);
  } else {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) {
        const Cell& c = row[i];
        if (const auto* s = std::get_if<std::string>(&c)) obj[t.columns[i]] = *s;
        else if (const auto* d = std::get_if<double>(&c)) obj[t.columns[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(io::format_double(*d));
        else if (const auto* n = std::get_if<std::int64_t>(&c)) obj[t.columns[i]] = *n;
        else obj[t.columns[i]] = nullptr;
      }
      arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << '\n';
  }
}

void emit_plot(const Options& o, const io::Plot& p) {
  if (o.plot.empty()) return;
  std::ofstream f(o.plot, std::ios::binary);
  if (!f) throw invalid_input("cannot open " + o.plot);
  io::write_svg(f, p);
}

Cell num(double v) { return v; }
Cell count(long long v) { return static_cast<std::int64_t>(v); }

// ---------------------------------------------------------------- commands

Table pole_table(const std::vector<ResonancePole>& poles) {
  Table t{{"k_re", "k_im", "E0", "Gamma", "tau", "classification", "residual", "newton_iters"}, {}};
  for (const auto& p : poles)
    t.add({num(p.k.real()), num(p.k.imag()), num(p.energy()), num(p.width()), num(p.lifetime()),
           to_string(p.classification), num(p.residual), count(p.newton_iters)});
  return t;
}

int cmd_poles(const Options& o) {
  const auto poles = model_poles(o.kind(), o.pint(), o.search_region(), o.tol);
  emit(o, pole_table(poles));
  io::Plot p{"poles (" + o.model + ")", "Re k", "Im k", {{"poles", {}, {}, false}}};
  for (const auto& q : poles) {
    p.series[0].x.push_back(q.k.real());
    p.series[0].y.push_back(q.k.imag());
  }
  emit_plot(o, p);
  return 0;
}

// Checkpoint: a header line identifying the scan, then one block per
// finished b-line.  A block is only used if its closing "E" line is present.
class Checkpoint {
 public:
  Checkpoint(std::string path, std::string ident) : path_(std::move(path)), ident_(std::move(ident)) {}

  std::vector<std::vector<ScanVertex>> load(std::size_t n_lines) {
    std::vector<std::vector<ScanVertex>> preset(n_lines);
    std::ifstream in(path_);
    if (!in) return preset;
    std::string line;
    if (!std::getline(in, line)) return preset;
    if (line != ident_) throw invalid_input("checkpoint " + path_ + " belongs to a different scan");
    std::size_t idx = 0;
    std::vector<ScanVertex> block;
    bool open = false;
    while (std::getline(in, line)) {
      const auto f = io::split_csv_line(line);
      if (f[0] == "L" && f.size() == 2) {
        idx = std::stoul(f[1]);
        block.clear();
        open = idx < n_lines;
      } else if (open && f[0] == "V" && f.size() == 6) {
        ScanVertex v;
        v.a = io::parse_double(f[1]);
        v.b = io::parse_double(f[2]);
        v.zeta = io::parse_double(f[3]);
        v.status = f[4] == "OK" ? VertexStatus::ok : f[4] == "SINGULAR_B" ? VertexStatus::singular_b : VertexStatus::failed;
        if (v.status == VertexStatus::failed) v.error = f[4];
        block.push_back(std::move(v));
      } else if (open && f[0] == "P" && f.size() == 5 && !block.empty()) {
        block.back().poles.push_back(make_pole({io::parse_double(f[1]), io::parse_double(f[2])},
                                               io::parse_double(f[3]), std::stoi(f[4])));
      } else if (open && f[0] == "E") {
        preset[idx] = block;
        open = false;
      } else {
        open = false;
      }
    }
    done_ = true;
    return preset;
  }

  void save(std::size_t line, const std::vector<ScanVertex>& vs) {
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!done_) {
      out << ident_ << '\n';
      done_ = true;
    }
    out << "L," << line << '\n';
    for (const auto& v : vs) {
      out << "V," << io::format_double(v.a) << ',' << io::format_double(v.b) << ',' << io::format_double(v.zeta) << ','
          << status_name(v) << ',' << v.poles.size() << '\n';
      for (const auto& p : v.poles)
        out << "P," << io::format_double(p.k.real()) << ',' << io::format_double(p.k.imag()) << ','
            << io::format_double(p.residual) << ',' << p.newton_iters << '\n';
    }
    out << "E\n";
  }

 private:
  std::string path_, ident_;
  std::mutex mu_;
  bool done_ = false;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + io::format_double(v[i]);
  return s;
}

int cmd_scan(const Options& o) {
  ScanGrid grid;
  grid.a = o.a_grid.empty() ? std::vector<double>{o.a} : parse_grid(o.a_grid, "--a-grid");
  grid.b = o.b_grid.empty() ? std::vector<double>{o.b} : parse_grid(o.b_grid, "--b-grid");
  grid.zeta = o.zeta_grid.empty() ? std::vector<double>{o.zeta} : parse_grid(o.zeta_grid, "--zeta-grid");
  for (double z : grid.zeta) PointInteraction(0.0, 0.0, z);
  const SearchRegion region = o.search_region();

  ScanOptions so;
  so.tol = o.tol;
  so.workers = o.workers;
  std::unique_ptr<Checkpoint> ck;
  if (!o.checkpoint.empty()) {
    std::ostringstream id;
    id << "# ptres scan model=" << o.model << " F=" << io::format_double(o.F) << " a=" << join(grid.a)
       << " b=" << join(grid.b) << " zeta=" << join(grid.zeta) << " region=" << join({region.re_lo, region.re_hi, region.im_lo, region.im_hi})
       << " grid=" << region.n_re << 'x' << region.n_im << " tol=" << io::format_double(o.tol);
    ck = std::make_unique<Checkpoint>(o.checkpoint, id.str());
    so.preset = ck->load(grid.a.size() * grid.zeta.size());
    so.on_line = [&](std::size_t line, const std::vector<ScanVertex>& vs) { ck->save(line, vs); };
  }
  const auto set = scan_parameters(o.kind(), grid, region, so);

  Table t{{"a", "b", "zeta", "pole_index", "track", "k_re", "k_im", "residual", "status"}, {}};
  io::Plot plot{"pole trajectories (" + o.model + ")", "Re k", "Im k", {}};
  std::map<std::string, std::size_t> series_of;
  for (const auto& v : set.vertices) {
    if (v.poles.empty()) {
      t.add({num(v.a), num(v.b), num(v.zeta), {}, {}, {}, {}, {}, status_name(v)});
      continue;
    }
    for (std::size_t i = 0; i < v.poles.size(); ++i) {
      const auto& p = v.poles[i];
      t.add({num(v.a), num(v.b), num(v.zeta), count(static_cast<long long>(i)), count(v.track[i]), num(p.k.real()),
             num(p.k.imag()), num(p.residual), status_name(v)});
      std::ostringstream key;
      key << "a=" << io::format_double(v.a) << " zeta=" << io::format_double(v.zeta) << " #" << v.track[i];
      auto [it, fresh] = series_of.try_emplace(key.str(), plot.series.size());
      if (fresh) plot.series.push_back({key.str(), {}, {}, true});
      plot.series[it->second].x.push_back(p.k.real());
      plot.series[it->second].y.push_back(p.k.imag());
    }
  }
  for (auto& s : plot.series) s.label.clear();
  emit(o, t);
  emit_plot(o, plot);
  return 0;
}

int cmd_green(const Options& o) {
  const ModelKind kind = o.kind();
  const cplx k = parse_complex(o.k, "--k");
  const auto xs = parse_grid(o.x_grid, "--x");
  const PerturbedGreen g(kind, o.pint(), k);
  Table t{{"x", "xp", "G_re", "G_im", "G0_re", "G0_im"}, {}};
  io::Plot plot{"|G(x, x')|", "x", "|G|", {{"G", {}, {}, true}, {"G0", {}, {}, true}}};
  for (double x : xs) {
    const cplx v = g(x, o.xp).value;
    const cplx v0 = g.free()(x, o.xp).value;
    t.add({num(x), num(o.xp), num(v.real()), num(v.imag()), num(v0.real()), num(v0.imag())});
    plot.series[0].x.push_back(x);
    plot.series[0].y.push_back(std::abs(v));
    plot.series[1].x.push_back(x);
    plot.series[1].y.push_back(std::abs(v0));
  }
  emit(o, t);
  emit_plot(o, plot);
  return 0;
}

int cmd_matching(const Options& o) {
  const PointInteraction pint = o.pint();
  Table t{{"a", "b", "zeta", "m11", "m12", "m21", "m22", "det", "singular_case"}, {}};
  if (const auto c = singular_case_of(pint)) {
    t.add({num(pint.a()), num(pint.b()), num(pint.zeta()), {}, {}, {}, {}, {},
           *c == SingularCase::b_plus ? "b_plus" : "b_minus"});
  } else {
    const auto m = matching_matrix(pint);
    t.add({num(pint.a()), num(pint.b()), num(pint.zeta()), num(m.m11), num(m.m12), num(m.m21), num(m.m22), num(m.det()),
           "none"});
  }
  emit(o, t);
  return 0;
}

int cmd_transmission(const Options& o) {
  const auto ks = parse_grid(o.k_grid, "--k-grid");
  const auto bs = o.b_grid.empty() ? std::vector<double>{o.b} : parse_grid(o.b_grid, "--b-grid");
  Table t{{"k", "b", "T", "R", "t_re", "t_im", "r_re", "r_im"}, {}};
  const bool over_b = bs.size() > 1;
  io::Plot plot{"transmission", over_b ? "b" : "k", "T", {{"T", {}, {}, true}}};
  for (double k : ks)
    for (double b : bs) {
      const PointInteraction pint(o.a, b, o.zeta);
      if (singular_case_of(pint)) {
        t.add({num(k), num(b), num(0.0), num(1.0), {}, {}, {}, {}});
        continue;
      }
      const auto s = transmission(k, pint);
      t.add({num(k), num(b), num(s.T), num(s.R), num(s.t.real()), num(s.t.imag()), num(s.r.real()), num(s.r.imag())});
      plot.series[0].x.push_back(over_b ? b : k);
      plot.series[0].y.push_back(s.T);
    }
  emit(o, t);
  emit_plot(o, plot);
  return 0;
}

int cmd_wavefunction(const Options& o) {
  const ModelKind kind = o.kind();
  const auto poles = model_poles(kind, o.pint(), o.search_region(), o.tol);
  if (o.pole < 0 || o.pole >= static_cast<int>(poles.size()))
    throw invalid_input("--pole " + std::to_string(o.pole) + " out of range (" + std::to_string(poles.size()) + " poles)");
  const auto xs = parse_grid(o.x_grid, "--x");
  const auto w = residue_wavefunction(kind, o.pint(), poles[static_cast<std::size_t>(o.pole)], xs);
  Table t{{"x", "psi_re", "psi_im"}, {}};
  io::Plot plot{"residue wave function", "x", "|psi|", {{"psi", {}, {}, true}}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.add({num(xs[i]), num(w.values[i].real()), num(w.values[i].imag())});
    plot.series[0].x.push_back(xs[i]);
    plot.series[0].y.push_back(std::abs(w.values[i]));
  }
  emit(o, t);
  emit_plot(o, plot);
  return 0;
}

int cmd_verify(const Options& o) {
  if (o.fast && o.full) throw invalid_input("choose one of --fast and --full");
  const auto level = o.full ? verify::Level::full : verify::Level::fast;
  const auto results = verify::run(level);
  Table t{{"module", "check", "status", "measured", "threshold", "detail"}, {}};
  for (const auto& r : results) {
    const std::string status = r.advisory ? "ADVISORY" : r.pass ? "PASS" : "FAIL";
    t.add({r.module, r.name, status, num(r.measured), num(r.threshold), r.detail});
    std::cerr << (r.pass ? "pass " : "FAIL ") << r.module << '/' << r.name << "  measured=" << io::format_double(r.measured)
              << " threshold=" << io::format_double(r.threshold) << (r.detail.empty() ? "" : "  " + r.detail) << '\n';
  }
  emit(o, t);
  const bool ok = verify::all_passed(results);
  std::cerr << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green's functions and resonance poles for a delta + delta' point interaction"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  // Lists such as region=-0.1,4,-2,0.5 stay one value, parsed like the flag.
  app.get_config_formatter_base()->arrayDelimiter(';');

  Options o;
  app.add_option("--model", o.model, "oscillator | linear")->check(CLI::IsMember({"oscillator", "linear"}));
  app.add_option("--F", o.F, "field strength of the linear model");
  app.add_option("--a", o.a, "delta strength");
  app.add_option("--b", o.b, "delta' strength");
  app.add_option("--zeta", o.zeta, "weight of the right-hand limit (eta = 1 - zeta)");
  app.add_option("--region", o.region, "search rectangle in k: re_lo,re_hi,im_lo,im_hi");
  app.add_option("--grid", o.grid, "seed grid n_re,n_im");
  app.add_option("--tol", o.tol, "residual tolerance");
  app.add_option("--out", o.out, "output file ('-' for stdout)");
  app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plot", o.plot, "also write an SVG plot to this path");
  app.add_option("--a-grid", o.a_grid, "scan: a values (lo:hi:n or list)");
  app.add_option("--b-grid", o.b_grid, "scan/transmission: b values");
  app.add_option("--zeta-grid", o.zeta_grid, "scan: zeta values");
  app.add_option("--checkpoint", o.checkpoint, "scan: resume file");
  app.add_option("--workers", o.workers, "scan: threads (0 = all cores)");
  app.add_option("--x", o.x_grid, "green/wavefunction: field points");
  app.add_option("--xp", o.xp, "green: source point");
  app.add_option("--k", o.k, "green: complex momentum re,im");
  app.add_option("--k-grid", o.k_grid, "transmission: k values");
  app.add_option("--pole", o.pole, "wavefunction: index into the pole table");
  app.add_flag("--fast", o.fast, "verify: quick suite (default)");
  app.add_flag("--full", o.full, "verify: include the dense oracle grids");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"poles", "pole table in a rectangle of the k-plane", cmd_poles},
      {"scan", "poles over an (a, b, zeta) grid", cmd_scan},
      {"green", "perturbed and free Green's function along x", cmd_green},
      {"matching", "matching matrix at the origin", cmd_matching},
      {"transmission", "transmission of the point interaction alone", cmd_transmission},
      {"wavefunction", "residue wave function of one pole", cmd_wavefunction},
      {"verify", "run the self-check suite", cmd_verify},
  };
  for (const auto& c : cmds) app.add_subcommand(c.name, c.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    for (const auto& c : cmds)
      if (app.got_subcommand(c.name)) return c.run(o);
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.code()) {
      case errc::invalid_argument:
      case errc::singular_b:
      case errc::degenerate_denominator:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 3;
}
