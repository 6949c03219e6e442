#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "piezogreen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = piezogreen::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kDir = PIEZOGREEN_MATERIALS_DIR;
const std::string kZno = kDir + "/zno.mat";

std::filesystem::path temp_file(const std::string& name, const std::string& contents = "") {
  const auto p = std::filesystem::temp_directory_path() / ("piezogreen_test_" + name);
  if (!contents.empty()) std::ofstream(p) << contents;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const auto r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("roots"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, BadArgumentsAreUsageErrors) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"eval", "--material", kZno}).code, 2);
  EXPECT_EQ(run({"eval", "--material", kZno, "--point", "1,2"}).code, 2);
  EXPECT_EQ(run({"eval", "--material", kZno, "--point", "1,0,1", "--repr", "polar"}).code, 2);
  EXPECT_EQ(run({"eval", "--material", "/nonexistent.mat", "--point", "1,0,1"}).code, 2);
  EXPECT_EQ(run({"grid", "--material", kZno, "--rho", "0:1", "--z", "0:1:2"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Roots) {
  const auto r = run({"roots", "--material", kZno});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* key : {"A = ", "D = ", "A1 = 0.9589", "A2 = 0.2709", "degeneracy_gap = ", "|s4| = "})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
}

TEST(Cli, DegenerateMaterialExitsOne) {
  const auto path = temp_file("iso.mat",
                              "c11 = 100e9\nc33 = 100e9\nc44 = 30e9\nc66 = 30e9\nc13 = 40e9\n"
                              "e15 = 0\ne31 = 0\ne33 = 0\neta11 = 1e-10\neta33 = 1e-10\n");
  const auto r = run({"roots", "--material", path.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("distinct roots"), std::string::npos) << r.err;
  std::filesystem::remove(path);
}

TEST(Cli, EvalPrintsUpperTriangle) {
  const auto r = run({"eval", "--material", kZno, "--point", "1,0,0.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 10u);
  EXPECT_EQ(r.out.rfind("G11 = ", 0), 0u);

  const auto csv = run({"eval", "--material", kZno, "--point", "1,0,0.5", "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("x,y,z,G11,G12,G13,G14,G22,G23,G24,G33,G34,G44\n", 0), 0u);

  // The printed value round-trips to the library result.
  const auto g = piezogreen::GreensEvaluator(piezogreen::io::load_material(kZno)).eval_cartesian({1, 0, 0.5});
  EXPECT_NE(r.out.find("G44 = " + piezogreen::io::format_double(g(3, 3))), std::string::npos);

  const auto cyl = run({"eval", "--material", kZno, "--point", "0,1,0.5", "--repr", "cyl"});
  EXPECT_NE(cyl.out.find("G_rho4 = "), std::string::npos);
}

TEST(Cli, GridCsv) {
  const auto out = temp_file("grid.csv");
  const auto r = run({"grid", "--material", kZno, "--axis-plane", "rz", "--rho", "0:1:3", "--z", "0.5:1:2", "--out",
                      out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("rho,z,G11,G12,G13,G14,G22,G23,G24,G33,G34,G44\n", 0), 0u);
  EXPECT_EQ(count_lines(text), 7u);
  std::filesystem::remove(out);

  const auto origin = run({"grid", "--material", kZno, "--rho", "0:1:2", "--z", "0:1:2"});
  EXPECT_EQ(origin.code, 2);
  EXPECT_NE(origin.err.find("origin"), std::string::npos);
}

TEST(Cli, ValidateIsDeterministicAndThreadIndependent) {
  const auto a = run({"validate", "--material", kZno, "--points", "30", "--nodes", "256", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.out << a.err;
  EXPECT_NE(a.out.find("status = PASS"), std::string::npos);
  ::setenv("PIEZOGREEN_THREADS", "3", 1);
  const auto b = run({"validate", "--material", kZno, "--points", "30", "--nodes", "256", "--seed", "5"});
  ::unsetenv("PIEZOGREEN_THREADS");
  EXPECT_EQ(a.out, b.out);
  const auto c = run({"validate", "--material", kZno, "--points", "30", "--nodes", "256", "--seed", "6"});
  EXPECT_NE(a.out, c.out);
}

TEST(Cli, ValidateFailsWithTooFewNodes) {
  const auto r = run({"validate", "--material", kZno, "--points", "10", "--nodes", "8"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("status = FAIL"), std::string::npos);
  EXPECT_EQ(run({"validate", "--material", kZno, "--nodes", "9"}).code, 2);
}

TEST(Cli, Decoupled) {
  const auto r = run({"decoupled", "--material", kZno});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("set to zero"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  const auto clean = run({"decoupled", "--material", kDir + "/zno_uncoupled.mat"});
  EXPECT_EQ(clean.code, 0);
  EXPECT_TRUE(clean.err.empty());
}

TEST(Cli, FieldCsv) {
  const auto src = temp_file("src.txt", "0 0 0 0 0 0 -1e-12\n0.5 0 0 1 0 0 0\n");
  const auto pts = temp_file("pts.txt", "1 1 1\n0 0 2\n");
  const auto r = run({"field", "--material", kZno, "--sources", src.string(), "--points", pts.string(), "--point",
                      "0.1,0.2,0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("x,y,z,u1,u2,u3,phi\n", 0), 0u);
  EXPECT_EQ(count_lines(r.out), 4u);

  const auto clash = run({"field", "--material", kZno, "--sources", src.string(), "--point", "0.5,0,0"});
  EXPECT_EQ(clash.code, 1);
  EXPECT_NE(clash.err.find("source #1"), std::string::npos);
  std::filesystem::remove(src);
  std::filesystem::remove(pts);
}
