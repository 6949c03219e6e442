#ifndef PIEZOGREEN_IO_HPP
#define PIEZOGREEN_IO_HPP

// Text formats:
//   material file  `key = value` lines, keys c11 c33 c44 c66 c13 e15 e31 e33
//                  eta11 eta33 (all mandatory, any order), SI values, `#` comments
//   sources file   `x y z F1 F2 F3 F4` per line (F4 = -charge), `#` comments
//   points file    `x y z` per line, `#` comments

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "piezogreen/core.hpp"
#include "piezogreen/field.hpp"
#include "piezogreen/material.hpp"

namespace piezogreen::io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string_view strip_comment(std::string_view s) {
  const auto hash = s.find('#');
  return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

inline std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

}  // namespace detail

/// Parses one floating-point number occupying all of `text`.
inline bool parse_double(std::string_view text, double& out) {
  text = detail::trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

inline MaterialModuli parse_material(std::istream& in, const std::string& source = "<material>") {
  static const std::map<std::string, double MaterialModuli::*, std::less<>> keys{
      {"c11", &MaterialModuli::c11}, {"c33", &MaterialModuli::c33},     {"c44", &MaterialModuli::c44},
      {"c66", &MaterialModuli::c66}, {"c13", &MaterialModuli::c13},     {"e15", &MaterialModuli::e15},
      {"e31", &MaterialModuli::e31}, {"e33", &MaterialModuli::e33},     {"eta11", &MaterialModuli::eta11},
      {"eta33", &MaterialModuli::eta33}};

  MaterialModuli m;
  std::map<std::string, bool, std::less<>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(detail::where(source, lineno) + "expected `key = value`");
    const std::string key(detail::trim(body.substr(0, eq)));
    const auto it = keys.find(key);
    if (it == keys.end()) throw ParseError(detail::where(source, lineno) + "unknown key `" + key + "`");
    if (seen[key]) throw ParseError(detail::where(source, lineno) + "duplicate key `" + key + "`");
    double value = 0.0;
    if (!parse_double(body.substr(eq + 1), value)) {
      throw ParseError(detail::where(source, lineno) + "bad number for `" + key + "`");
    }
    m.*(it->second) = value;
    seen[key] = true;
  }
  std::string missing;
  for (const auto& [key, member] : keys) {
    if (!seen[key]) missing += (missing.empty() ? "" : ", ") + key;
  }
  if (!missing.empty()) throw ParseError(source + ": missing keys: " + missing);
  return m;
}

inline MaterialModuli load_material(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open material file `" + path + "`");
  return parse_material(in, path);
}

namespace detail {

template <std::size_t N>
std::vector<std::array<double, N>> parse_rows(std::istream& in, const std::string& source) {
  std::vector<std::array<double, N>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = strip_comment(line);
    if (body.empty()) continue;
    std::istringstream fields{std::string(body)};
    std::array<double, N> row{};
    std::string token;
    std::size_t n = 0;
    while (fields >> token) {
      if (n == N || !parse_double(token, row[n])) {
        throw ParseError(where(source, lineno) + "expected " + std::to_string(N) + " numbers");
      }
      ++n;
    }
    if (n != N) throw ParseError(where(source, lineno) + "expected " + std::to_string(N) + " numbers");
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline std::vector<GeneralizedSource> parse_sources(std::istream& in, const std::string& source = "<sources>") {
  std::vector<GeneralizedSource> out;
  for (const auto& r : detail::parse_rows<7>(in, source)) out.push_back({{r[0], r[1], r[2]}, {r[3], r[4], r[5], r[6]}});
  return out;
}

inline std::vector<Vec3> parse_points(std::istream& in, const std::string& source = "<points>") {
  std::vector<Vec3> out;
  for (const auto& r : detail::parse_rows<3>(in, source)) out.push_back({r[0], r[1], r[2]});
  return out;
}

template <typename Parser>
auto load(const std::string& path, Parser parser) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open `" + path + "`");
  return parser(in, path);
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace piezogreen::io

#endif  // PIEZOGREEN_IO_HPP
