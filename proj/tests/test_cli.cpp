#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "ptres/io.hpp"
#include "support.hpp"

using ptres::ref::lines;
using ptres::ref::run;

namespace fs = std::filesystem;

namespace {

const std::string cli = PTRES_CLI;

std::string tmp(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "ptres_cli_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
  std::vector<std::vector<std::string>> out;
  for (const auto& l : lines(csv))
    if (!l.empty()) out.push_back(ptres::io::split_csv_line(l));
  return out;
}

}  // namespace

TEST(Cli, PolesUnperturbedOscillator) {
  const auto r = run(cli + " poles --model oscillator --a 0 --b 0");
  ASSERT_EQ(r.rc, 0);
  const auto t = rows(r.out);
  ASSERT_GT(t.size(), 1u);
  EXPECT_EQ(t[0], (std::vector<std::string>{"k_re", "k_im", "E0", "Gamma", "tau", "classification", "residual", "newton_iters"}));
  int resonances = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    EXPECT_LT(std::stod(t[i][6]), 1e-10);
    resonances += t[i][5] == "resonance";
  }
  EXPECT_GT(resonances, 0);
}

TEST(Cli, PolesCollapse) {
  const auto r = run(cli + " poles --model oscillator --a 1 --b 1 --zeta 0.5");
  ASSERT_EQ(r.rc, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(std::stod(t[1][0]), 0.0, 1e-12);
  EXPECT_NEAR(std::stod(t[1][1]), -0.5, 1e-12);
  EXPECT_NEAR(std::stod(t[1][2]), -0.125, 1e-12);
}

TEST(Cli, PolesLinearMatchAiryRatioRoots) {
  // mpmath roots of i ks + Ai'(-ks^2)/Ai(-ks^2) at F = 1/2
  const double want[][2] = {{1.7011040818150378491, -0.32164687363423657548},
                            {2.1250365073308734184, -0.24152655342009577777},
                            {2.4263055241569030528, -0.20178286955709892616}};
  const auto r = run(cli + " poles --model linear --F 0.5 --a 0 --b 0 --region=0.3,2.5,-2,-0.01");
  ASSERT_EQ(r.rc, 0);
  const auto t = rows(r.out);
  ASSERT_EQ(t.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::stod(t[i + 1][0]), want[i][0], 1e-10);
    EXPECT_NEAR(std::stod(t[i + 1][1]), want[i][1], 1e-10);
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run(cli + " poles --zeta 1.5 2>/dev/null").rc, 3);
  EXPECT_EQ(run(cli + " poles --region 1,0,0,1 2>/dev/null").rc, 3);
  EXPECT_EQ(run(cli + " poles --model cubic 2>/dev/null").rc, 3);
  EXPECT_EQ(run(cli + " poles --b -1 2>/dev/null").rc, 3);
  // root on the contour
  EXPECT_EQ(run(cli + " poles --a 1 --b 1 --region=0,8,-3,0.5 2>/dev/null").rc, 2);
}

TEST(Cli, JsonMirrorsCsv) {
  const auto c = run(cli + " poles --a 1 --b 0.3 --region=-0.1,4,-2,0.5");
  const auto j = run(cli + " poles --a 1 --b 0.3 --region=-0.1,4,-2,0.5 --format json");
  ASSERT_EQ(c.rc, 0);
  ASSERT_EQ(j.rc, 0);
  const auto t = rows(c.out);
  const auto doc = nlohmann::json::parse(j.out);
  ASSERT_EQ(doc.size() + 1, t.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    EXPECT_EQ(doc[i]["k_re"].get<double>(), ptres::io::parse_double(t[i + 1][0]));
    EXPECT_EQ(doc[i]["k_im"].get<double>(), ptres::io::parse_double(t[i + 1][1]));
    EXPECT_EQ(doc[i]["classification"].get<std::string>(), t[i + 1][5]);
    EXPECT_EQ(doc[i]["newton_iters"].get<int>(), std::stoi(t[i + 1][7]));
  }
}

TEST(Cli, ConfigFileWithOverride) {
  const auto cfg = tmp("run.cfg");
  std::ofstream(cfg) << "a=1\nb=0.3\nregion=-0.1,4,-2,0.5\n";
  const auto from_file = run(cli + " poles --config " + cfg);
  const auto direct = run(cli + " poles --a 1 --b 0.3 --region=-0.1,4,-2,0.5");
  ASSERT_EQ(from_file.rc, 0);
  EXPECT_EQ(from_file.out, direct.out);
  const auto overridden = run(cli + " poles --config " + cfg + " --b 0.5");
  EXPECT_EQ(overridden.out, run(cli + " poles --a 1 --b 0.5 --region=-0.1,4,-2,0.5").out);
}

TEST(Cli, ScanSingleVertexReproducesPoles) {
  const auto p = rows(run(cli + " poles --a 1 --b 0.3 --region=-0.1,4,-2,0.5").out);
  const auto s = rows(run(cli + " scan --a-grid 1 --b-grid 0.3 --zeta-grid 0.5 --region=-0.1,4,-2,0.5").out);
  ASSERT_EQ(p.size(), s.size());
  EXPECT_EQ(s[0], (std::vector<std::string>{"a", "b", "zeta", "pole_index", "track", "k_re", "k_im", "residual", "status"}));
  for (std::size_t i = 1; i < p.size(); ++i) {
    EXPECT_EQ(s[i][5], p[i][0]);
    EXPECT_EQ(s[i][6], p[i][1]);
    EXPECT_EQ(s[i][7], p[i][6]);
    EXPECT_EQ(s[i][8], "OK");
  }
}

TEST(Cli, ScanFlagsSingularVertex) {
  const auto s = rows(run(cli + " scan --a-grid 1 --b-grid 0.8:1.2:5 --region=-0.1,3,-2,0.5").out);
  int singular = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i][8] == "SINGULAR_B") {
      ++singular;
      EXPECT_EQ(s[i][1], "1");
      EXPECT_EQ(s[i][5], "");
    }
  EXPECT_EQ(singular, 1);
}

TEST(Cli, ScanCheckpointIsIdempotent) {
  const auto ck = tmp("scan.ckpt");
  fs::remove(ck);
  const std::string args = " scan --a-grid 0:1:3 --b-grid 0:0.4:3 --zeta-grid 0.3,0.5 --region=-0.1,3,-2,0.5 --checkpoint " + ck;
  const auto first = run(cli + args);
  ASSERT_EQ(first.rc, 0);
  const auto second = run(cli + args);
  EXPECT_EQ(first.out, second.out);
  // a checkpoint cut in the middle of a block resumes to the same result
  const std::string full = slurp(ck);
  std::ofstream(ck, std::ios::binary) << full.substr(0, full.size() / 2);
  EXPECT_EQ(run(cli + args).out, first.out);
  // and without any checkpoint
  EXPECT_EQ(run(cli + " scan --a-grid 0:1:3 --b-grid 0:0.4:3 --zeta-grid 0.3,0.5 --region=-0.1,3,-2,0.5").out, first.out);
  // a checkpoint from another scan is refused
  EXPECT_EQ(run(cli + " scan --a-grid 0:1:2 --b-grid 0 --region=-0.1,3,-2,0.5 --checkpoint " + ck + " 2>/dev/null").rc, 3);
}

TEST(Cli, OtherCommands) {
  const auto g = rows(run(cli + " green --model linear --a 1 --b 0.2 --k 1,-0.3 --x=-1:1:5").out);
  EXPECT_EQ(g.size(), 6u);
  const auto m = rows(run(cli + " matching --a 2 --b 0.5").out);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NEAR(std::stod(m[1][3]), 3.0, 1e-15);
  EXPECT_EQ(m[1][8], "none");
  EXPECT_EQ(rows(run(cli + " matching --a 2 --b 1").out)[1][8], "b_plus");
  const auto svg = tmp("t.svg");
  const auto t = rows(run(cli + " transmission --a 0 --b-grid=-0.9:0.9:7 --plot " + svg).out);
  EXPECT_EQ(t.size(), 8u);
  EXPECT_NE(slurp(svg).find("</svg>"), std::string::npos);
  const auto w = rows(run(cli + " wavefunction --a 1 --b 0.3 --x=0:1:3 --region=0.5,4,-1.5,-0.01").out);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(run(cli + " wavefunction --pole 99 2>/dev/null").rc, 3);
}

TEST(Cli, VerifyFastIsDeterministic) {
  const auto a = tmp("verify_a.csv"), b = tmp("verify_b.csv");
  ASSERT_EQ(run(cli + " verify --fast --out " + a + " 2>/dev/null").rc, 0);
  ASSERT_EQ(run(cli + " verify --fast --out " + b + " 2>/dev/null").rc, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(a).rfind("module,check,status,measured,threshold,detail\n", 0), 0u);
}
