#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "cli_app.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using chirp::cli::run;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("riccati_chirp_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, ClassifyExamples) {
  auto r = cli({"classify", "--omega0", "1", "--shift", "0+5i"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "Periodic m=3 Omega_S=6\n");
  r = cli({"classify", "--omega0", "1", "--shift", "0+6i"});
  EXPECT_EQ(r.out, "Antiperiodic m=3 Omega_S=7\n");
  r = cli({"classify", "--omega0", "1", "--shift", "1+0i"});
  EXPECT_EQ(r.out, "Unbounded\n");
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(cli({"classify", "--shift", "i"}).code, 2);
  EXPECT_EQ(cli({"classify", "--omega0", "-1"}).code, 2);
  EXPECT_EQ(cli({"modes", "--window", "3,1"}).code, 2);
  EXPECT_EQ(cli({"modes", "--kinds", "W9"}).code, 2);
  EXPECT_EQ(cli({"modes", "--format", "xml"}).code, 2);
  EXPECT_EQ(cli({"modes", "--points", "0"}).code, 2);
  EXPECT_EQ(cli({"check", "--tol", "bogus=1"}).code, 2);
  EXPECT_EQ(cli({"check", "--tol", "riccati"}).code, 2);
  EXPECT_EQ(cli({"nonsense"}).code, 2);
  EXPECT_EQ(cli({}).code, 2);
  const auto r = cli({"modes", "--exclusion-radius", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  const auto r = cli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("modes"), std::string::npos);
}

TEST(Cli, ModesCsvLayout) {
  const auto r = cli({"modes", "--omega0", "1", "--shift", "0+5i", "--kinds", "U1,U2", "--window",
                      "-3,3", "--points", "600"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 601u);
  EXPECT_EQ(ls[0], "t,U1_re,U1_im,U2_re,U2_im");
  for (std::size_t i = 1; i < ls.size(); ++i) ASSERT_EQ(split(ls[i], ',').size(), 5u);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, CsvJsonParity) {
  const std::vector<std::string> base{"modes", "--omega0", "1", "--shift", "0+5i", "--kinds",
                                      "U1,U2", "--window", "-3,3", "--points", "600"};
  const auto csv = cli(base);
  auto jargs = base;
  jargs.insert(jargs.end(), {"--format", "json"});
  const auto js = cli(jargs);
  ASSERT_EQ(js.code, 0);
  const auto j = nlohmann::json::parse(js.out);
  const auto ls = lines(csv.out);
  ASSERT_EQ(j.size() + 1, ls.size());
  const auto header = split(ls[0], ',');
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto cells = split(ls[i + 1], ',');
    for (std::size_t c = 0; c < header.size(); ++c)
      ASSERT_EQ(j[i][header[c]].get<double>(), std::stod(cells[c])) << i << "," << header[c];
  }
  // Same decimal strings, not just the same doubles.
  EXPECT_NE(js.out.find(split(ls[1], ',')[1]), std::string::npos);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"modes", "--shift", "0+6i", "--points", "300"};
  EXPECT_EQ(cli(args).out, cli(args).out);
  const std::vector<std::string> chk{"check", "--shift", "0+5i", "--format", "csv"};
  EXPECT_EQ(cli(chk).out, cli(chk).out);
}

TEST(Cli, WindowAroundPoleExcludesNeighbourhood) {
  const auto r = cli({"modes", "--kinds", "V1", "--window", "1.4,1.8", "--points", "50"});
  ASSERT_EQ(r.code, 0);
  const double eps = 1e-2 * chirp::pi;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 51u);
  for (std::size_t i = 1; i < ls.size(); ++i)
    EXPECT_GE(std::abs(std::stod(split(ls[i], ',')[0]) - chirp::pi / 2), eps);
}

TEST(Cli, OverflowRowsDroppedAndCounted) {
  const auto r = cli({"modes", "--shift", "800", "--kinds", "U2", "--window", "-2,2", "--points", "41"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("nan"), std::string::npos);
  EXPECT_EQ(r.out.find("inf"), std::string::npos);
  EXPECT_NE(r.out.find("# dropped "), std::string::npos);
  EXPECT_NE(r.err.find("warning: dropped"), std::string::npos);
}

TEST(Cli, UnconvergedSeriesExitsThree) {
  const auto r = cli({"modes", "--shift", "0+5i", "--kinds", "U1", "--tol", "max_terms=3"});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, CheckExamples) {
  auto r = cli({"check", "--omega0", "1", "--shift", "0+5i"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

  r = cli({"check", "--omega0", "1", "--shift", "0.3+0i", "--format", "json"});
  EXPECT_EQ(r.code, 0) << r.out;
  auto j = nlohmann::json::parse(r.out);
  int skipped_periodicity = 0, residual_pass = 0;
  for (const auto& row : j) {
    const std::string name = row["name"];
    if (name.rfind("periodicity:", 0) == 0 && row["status"] == "SKIP") ++skipped_periodicity;
    if (name.rfind("ode_residual:", 0) == 0 && row["status"] == "PASS") ++residual_pass;
  }
  EXPECT_EQ(skipped_periodicity, 4);
  EXPECT_EQ(residual_pass, 8);

  r = cli({"check", "--omega0", "1", "--shift", "0+1.5i"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("QuasiperiodicBounded"), std::string::npos);
  EXPECT_NE(r.out.find("periodicity:U2"), std::string::npos);
}

TEST(Cli, CheckFailureExitsOne) {
  const auto r = cli({"check", "--shift", "0+5i", "--tol", "riccati=1e-30"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, FiguresWritesFourFiles) {
  const auto dir = scratch_dir("figures");
  const auto r = cli({"figures", "--out", dir.string(), "--points", "400"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"fig1.csv", "fig2.csv", "fig3.csv", "fig4.csv"}) {
    ASSERT_TRUE(fs::exists(dir / f)) << f;
    std::ifstream in(dir / f);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(split(header, ',').size(), 5u);
  }
  std::ifstream in(dir / "fig2.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,V1_re,V1_im,V2_re,V2_im");
  fs::remove_all(dir);
}

TEST(Cli, FiguresUnwritableDirectoryWritesNothing) {
  const auto dir = scratch_dir("blocked");
  fs::create_directories(dir);
  { std::ofstream(dir / "file") << "x"; }
  const auto r = cli({"figures", "--out", (dir / "file" / "sub").string(), "--points", "50"});
  EXPECT_EQ(r.code, 2);
  fs::remove_all(dir);
}

TEST(Cli, ModesToDirectory) {
  const auto dir = scratch_dir("modes");
  const auto r = cli({"modes", "--out", dir.string(), "--format", "json", "--points", "20"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, (dir / "modes.json").string() + "\n");
  std::ifstream in(dir / "modes.json");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(ss.str()).size(), 20u);
  fs::remove_all(dir);
}

TEST(Cli, Integrate) {
  const auto r = cli({"integrate", "--profile", "ShiftedU", "--shift", "0+5i", "--y0", "1", "--dy0",
                      "0+5i", "--t1", "1.2", "--points", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 11u);
  const auto last = split(ls.back(), ',');
  ASSERT_GE(last.size(), 3u);
  EXPECT_EQ(std::stod(last[0]), 1.2);
  const auto exact = chirp::mode(chirp::ModeKind::U2, chirp::OscillatorParams(1.0, {0.0, 5.0}), 1.2);
  EXPECT_NEAR(std::stod(last[1]), exact.real(), 1e-7);
  EXPECT_NEAR(std::stod(last[2]), exact.imag(), 1e-7);

  EXPECT_EQ(cli({"integrate", "--profile", "ShiftedU", "--t1", "2"}).code, 2);
  EXPECT_EQ(cli({"integrate", "--profile", "Nope", "--t1", "1"}).code, 2);
  EXPECT_EQ(cli({"integrate", "--profile", "ShiftedU"}).code, 2);
  EXPECT_EQ(cli({"integrate", "--profile", "ShiftedU", "--t1", "1", "--tol", "rtol=1e-20"}).code, 2);
}

TEST(Cli, Profiles) {
  const auto r = cli({"profiles", "--shift", "0+5i", "--points", "10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto header = split(lines(r.out)[0], ',');
  for (const char* col : {"ShiftedU_re", "ImagShiftV_im", "pump_h_re", "pump_g_im"})
    EXPECT_NE(std::find(header.begin(), header.end(), col), header.end()) << col;
  const auto real = cli({"profiles", "--shift", "0.5", "--points", "10"});
  ASSERT_EQ(real.code, 0);
  EXPECT_EQ(real.out.find("ImagShift"), std::string::npos);
  EXPECT_EQ(cli({"profiles", "--shift", "0.5", "--kinds", "pump_h"}).code, 2);
}

TEST(Cli, CheckTextKeepsExponents) {
  const auto r = cli({"check", "--omega0", "1", "--shift", "0+5i"});
  EXPECT_EQ(r.out.rfind("omega0=1 S=0+5i Periodic\n", 0), 0u);
  EXPECT_TRUE(std::regex_search(r.out, std::regex(R"(\nriccati:Standard +PASS \d\.\d{3}e-\d{2} +1\.000e-06 )")))
      << r.out;
}
