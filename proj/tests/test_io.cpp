#include <gtest/gtest.h>

#include <sstream>

#include "piezogreen.hpp"
#include "support/random_material.hpp"

using namespace piezogreen;

namespace {

const char* kZnoText = R"(# zinc oxide
c11 = 209.7e9
c33 = 210.9e9
c44 = 42.47e9   # shear
c66 = 44.29e9
c13 = 105.1e9

e15 = -0.48
e31 = -0.573
e33 = +1.32
eta11 = 7.570330583535001e-11
eta33 = 9.03127157334e-11
)";

MaterialModuli parse(const std::string& text) {
  std::istringstream in(text);
  return io::parse_material(in, "test.mat");
}

std::string replace_line(std::string text, const std::string& key, const std::string& line) {
  const auto at = text.find("\n" + key + " ");
  const auto end = text.find('\n', at + 1);
  return text.replace(at + 1, end - at - 1, line);
}

}  // namespace

TEST(Io, ParsesMaterial) {
  const auto m = parse(kZnoText);
  const auto ref = fixtures::zno();
  EXPECT_EQ(m.c11, ref.c11);
  EXPECT_EQ(m.c44, ref.c44);
  EXPECT_EQ(m.e33, ref.e33);
  EXPECT_DOUBLE_EQ(m.eta11, ref.eta11);
  EXPECT_DOUBLE_EQ(m.eta33, ref.eta33);
}

TEST(Io, ShippedMaterialFilesLoad) {
  const std::string dir = PIEZOGREEN_MATERIALS_DIR;
  EXPECT_DOUBLE_EQ(io::load_material(dir + "/zno.mat").eta33, fixtures::zno().eta33);
  EXPECT_EQ(io::load_material(dir + "/pzt4.mat").e15, 12.7);
  EXPECT_TRUE(io::load_material(dir + "/zno_uncoupled.mat").is_decoupled());
}

TEST(Io, MaterialErrorsNameLineAndKey) {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      (void)parse(text);
      ADD_FAILURE() << "no error for fragment " << fragment;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error(std::string(kZnoText) + "c11 = 1\n", "duplicate key `c11`");
  expect_error(std::string(kZnoText) + "c12 = 1\n", "unknown key `c12`");
  expect_error(replace_line(kZnoText, "c33", "c33 = abc"), "test.mat:3: bad number");
  expect_error(replace_line(kZnoText, "c66", "c66 44.29e9"), "test.mat:5: expected `key = value`");
  expect_error(replace_line(kZnoText, "e31", "# e31 gone"), "missing keys: e31");
  EXPECT_THROW(io::load_material("/nonexistent/file.mat"), ParseError);
}

TEST(Io, ParsesSourcesAndPoints) {
  std::istringstream src("# x y z F1 F2 F3 F4\n0 0 0 1 0 0 0\n1 2 3 0 0 0 -1e-9 # charge\n\n");
  const auto s = io::parse_sources(src);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].position[2], 3.0);
  EXPECT_EQ(s[1].F[3], -1e-9);

  std::istringstream pts("1 2 3\n  -4.5 0 1e-3\n");
  const auto p = io::parse_points(pts);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[1][0], -4.5);

  std::istringstream short_row("1 2\n");
  EXPECT_THROW(io::parse_points(short_row, "pts"), ParseError);
  std::istringstream long_row("1 2 3 4\n");
  EXPECT_THROW(io::parse_points(long_row, "pts"), ParseError);
  std::istringstream junk("1 2 x\n");
  EXPECT_THROW(io::parse_points(junk, "pts"), ParseError);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, -1.0 / 3.0, 6.02214076e23, 5e-324, 1e-11 * pi}) {
    double back = 0.0;
    ASSERT_TRUE(io::parse_double(io::format_double(v), back));
    EXPECT_EQ(back, v);
  }
  double x = 0.0;
  EXPECT_FALSE(io::parse_double("", x));
  EXPECT_FALSE(io::parse_double("1.0abc", x));
  EXPECT_TRUE(io::parse_double(" +2.5 ", x));
  EXPECT_EQ(x, 2.5);
}
