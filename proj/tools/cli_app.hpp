#ifndef PIEZOGREEN_TOOLS_CLI_APP_HPP
#define PIEZOGREEN_TOOLS_CLI_APP_HPP

// Command-line frontend. Exit codes: 0 success, 1 validation failure or
// degenerate/invalid material, 2 usage error. Data goes to stdout or --out,
// diagnostics to stderr. PIEZOGREEN_THREADS caps the worker count (0 or
// unset = hardware concurrency); output does not depend on it.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "piezogreen.hpp"

namespace piezogreen::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

using io::format_double;

inline Vec3 parse_triple(const std::string& text) {
  Vec3 v{};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const auto comma = text.find(',', start);
    const bool last = (i == 2);
    if (last != (comma == std::string::npos)) throw UsageError("expected x,y,z but got `" + text + "`");
    const auto field = text.substr(start, last ? std::string::npos : comma - start);
    if (!io::parse_double(field, v[i])) throw UsageError("bad number `" + field + "` in `" + text + "`");
    start = comma + 1;
  }
  return v;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  double at(std::size_t i) const {
    return n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
};

/// `a:b:n`, n >= 1 equally spaced values including both ends.
inline Range parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  Range r;
  double count = 0.0;
  if (c2 == std::string::npos || !io::parse_double(text.substr(0, c1), r.lo) ||
      !io::parse_double(text.substr(c1 + 1, c2 - c1 - 1), r.hi) || !io::parse_double(text.substr(c2 + 1), count) ||
      !(count >= 1.0) || count != std::floor(count) || count > 1e7) {
    throw UsageError("expected a:b:n with integer n >= 1 but got `" + text + "`");
  }
  r.n = static_cast<std::size_t>(count);
  return r;
}

inline unsigned thread_cap() {
  const char* env = std::getenv("PIEZOGREEN_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  double v = 0.0;
  if (!io::parse_double(env, v) || v < 0.0 || v != std::floor(v)) {
    throw UsageError("PIEZOGREEN_THREADS must be a non-negative integer");
  }
  return static_cast<unsigned>(std::min(v, 4096.0));
}

inline unsigned worker_count() {
  const unsigned cap = thread_cap();
  return cap == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cap;
}

/// Runs body(i) for i in [0, n) on the capped worker count. Each index is
/// written by exactly one worker, so results do not depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += workers) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Sends `write` to the file at `path`, or to `out` when the path is empty.
inline void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot open `" + path + "` for writing");
  write(file);
  if (!file) throw Error("write to `" + path + "` failed");
}

inline std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  if (z.imag() != 0.0) s += (z.imag() < 0.0 ? " - " : " + ") + format_double(std::abs(z.imag())) + "i";
  return s;
}

inline void write_csv_row(std::ostream& os, std::initializer_list<double> head, const std::array<double, 10>& tail) {
  bool first = true;
  for (double v : head) {
    os << (first ? "" : ",") << format_double(v);
    first = false;
  }
  for (double v : tail) {
    os << (first ? "" : ",") << format_double(v);
    first = false;
  }
  os << '\n';
}

inline constexpr const char* kUpperHeader = "G11,G12,G13,G14,G22,G23,G24,G33,G34,G44";

}  // namespace detail

struct Options {
  std::string material;
  std::string point = "1,0,1";
  std::string repr = "cart";
  std::string format = "pretty";
  std::string plane = "rz";
  std::string rho_range;
  std::string z_range;
  std::string out;
  std::string sources;
  std::string points_file;
  std::vector<std::string> field_points;
  std::size_t points = 200;
  std::size_t nodes = kDefaultOracleNodes;
  std::uint64_t seed = kDefaultSeed;
};

inline int cmd_roots(const Options& o, std::ostream& out) {
  const auto m = io::load_material(o.material);
  const auto spec = solve_spectrum(m);
  const Vec3 p = detail::parse_triple(o.point);
  const auto& c = spec.coefficients;
  out << "A = " << detail::format_double(c.A) << '\n'
      << "B = " << detail::format_double(c.B) << '\n'
      << "C = " << detail::format_double(c.C) << '\n'
      << "D = " << detail::format_double(c.D) << '\n';
  for (std::size_t l = 0; l < 4; ++l) out << "A" << l + 1 << " = " << detail::format_complex(spec.roots[l]) << '\n';
  out << "degeneracy_gap = " << detail::format_double(spec.degeneracy_gap) << '\n';
  const auto s = residue_zero_diagnostic(spec, std::hypot(p[0], p[1]), p[2]);
  for (std::size_t l = 0; l < 4; ++l) out << "|s" << l + 1 << "| = " << detail::format_double(std::abs(s[l])) << '\n';
  return kExitOk;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  const auto m = io::load_material(o.material);
  const GreensEvaluator eval(m);
  const Vec3 p = detail::parse_triple(o.point);
  const bool csv = o.format == "csv";
  if (o.repr == "cyl") {
    const auto c = eval.eval_cylindrical(std::hypot(p[0], p[1]), p[2]);
    const std::array<std::pair<const char*, double>, 7> items{{{"G_phiphi", c.G_phiphi},
                                                               {"G_rhorho", c.G_rhorho},
                                                               {"G_rhoz", c.G_rhoz},
                                                               {"G_zz", c.G_zz},
                                                               {"G_rho4", c.G_rho4},
                                                               {"G_z4", c.G_z4},
                                                               {"G_44", c.G_44}}};
    if (csv) {
      out << "rho,z";
      for (const auto& [name, v] : items) out << ',' << name;
      out << '\n' << detail::format_double(c.rho) << ',' << detail::format_double(c.z);
      for (const auto& [name, v] : items) out << ',' << detail::format_double(v);
      out << '\n';
    } else {
      for (const auto& [name, v] : items) out << name << " = " << detail::format_double(v) << '\n';
    }
    return kExitOk;
  }
  const auto g = upper_triangle(eval.eval_cartesian(p));
  if (csv) {
    out << "x,y,z," << detail::kUpperHeader << '\n';
    detail::write_csv_row(out, {p[0], p[1], p[2]}, g);
  } else {
    std::size_t n = 0;
    for (int i = 1; i <= 4; ++i)
      for (int j = i; j <= 4; ++j) out << 'G' << i << j << " = " << detail::format_double(g[n++]) << '\n';
  }
  return kExitOk;
}

inline int cmd_grid(const Options& o, std::ostream& out) {
  if (o.plane != "rz") throw UsageError("only --axis-plane rz is supported");
  const auto rr = detail::parse_range(o.rho_range);
  const auto zr = detail::parse_range(o.z_range);
  std::vector<Vec3> pts;
  pts.reserve(rr.n * zr.n);
  for (std::size_t i = 0; i < rr.n; ++i)
    for (std::size_t j = 0; j < zr.n; ++j) {
      const Vec3 p{rr.at(i), 0.0, zr.at(j)};
      if (p[0] < 0.0) throw UsageError("rho values must be non-negative");
      if (p[0] == 0.0 && p[2] == 0.0) throw UsageError("grid contains the origin, where G is singular");
      pts.push_back(p);
    }
  const auto m = io::load_material(o.material);
  const GreensEvaluator eval(m);
  const auto values = eval.eval_batch(pts, detail::worker_count());
  detail::emit(o.out, out, [&](std::ostream& os) {
    os << "rho,z," << detail::kUpperHeader << '\n';
    for (std::size_t k = 0; k < pts.size(); ++k) detail::write_csv_row(os, {pts[k][0], pts[k][2]}, upper_triangle(values[k]));
  });
  return kExitOk;
}

inline constexpr double kValidateTolerance = 1e-8;

inline int cmd_validate(const Options& o, std::ostream& out) {
  if (o.points == 0) throw UsageError("--points must be positive");
  if (o.nodes < 8 || o.nodes % 2 != 0) throw UsageError("--nodes must be even and at least 8");
  const auto m = io::load_material(o.material);
  const GreensEvaluator eval(m);
  const auto pts = random_points(o.points, o.seed);

  std::vector<double> dev(pts.size());
  std::vector<OracleDiagnostics> diag(pts.size());
  detail::parallel_for(pts.size(), [&](std::size_t i) {
    const auto closed = eval.closed_form(pts[i]);
    const auto quad = integrate(eval.cartesian_moduli(), pts[i], o.nodes, &diag[i]);
    dev[i] = relative_deviation(closed, quad);
  });

  std::size_t worst = 0;
  double sum = 0.0;
  double cond = 0.0;
  std::size_t ill = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (dev[i] > dev[worst]) worst = i;
    sum += dev[i];
    cond = std::max(cond, diag[i].max_condition);
    ill += diag[i].ill_conditioned_nodes;
  }
  const bool ok = dev[worst] <= kValidateTolerance;
  out << "points = " << pts.size() << '\n'
      << "nodes = " << o.nodes << '\n'
      << "seed = " << o.seed << '\n'
      << "max_relative_deviation = " << detail::format_double(dev[worst]) << '\n'
      << "mean_relative_deviation = " << detail::format_double(sum / static_cast<double>(pts.size())) << '\n'
      << "worst_point = " << detail::format_double(pts[worst][0]) << ',' << detail::format_double(pts[worst][1])
      << ',' << detail::format_double(pts[worst][2]) << '\n'
      << "oracle_max_condition = " << detail::format_double(cond) << '\n'
      << "oracle_ill_conditioned_nodes = " << ill << '\n'
      << "tolerance = " << detail::format_double(kValidateTolerance) << '\n'
      << "status = " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kExitOk : kExitFailure;
}

inline int cmd_decoupled(const Options& o, std::ostream& out, std::ostream& err) {
  auto m = io::load_material(o.material);
  if (!m.is_decoupled()) {
    err << "note: e15, e31, e33 set to zero for the decoupled check\n";
    m = m.decoupled();
  }
  const auto report = decoupled_consistency(m);
  for (const auto& c : report.checks) {
    out << (c.passed() ? "PASS " : "FAIL ") << c.name << " (residual " << detail::format_double(c.residual)
        << ", tolerance " << detail::format_double(c.tolerance) << ")\n";
  }
  out << "status = " << (report.all_passed() ? "PASS" : "FAIL") << '\n';
  return report.all_passed() ? kExitOk : kExitFailure;
}

inline int cmd_field(const Options& o, std::ostream& out) {
  const auto sources = io::load(o.sources, [](std::istream& in, const std::string& name) {
    return io::parse_sources(in, name);
  });
  std::vector<Vec3> pts;
  if (!o.points_file.empty()) {
    pts = io::load(o.points_file, [](std::istream& in, const std::string& name) { return io::parse_points(in, name); });
  }
  for (const auto& text : o.field_points) pts.push_back(detail::parse_triple(text));
  if (pts.empty()) throw UsageError("field: give --points FILE or at least one --point x,y,z");

  const auto m = io::load_material(o.material);
  const GreensEvaluator eval(m);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t s = 0; s < sources.size(); ++s)
      if (pts[i] == sources[s].position) {
        throw OriginSingularity("field point #" + std::to_string(i) + " coincides with source #" + std::to_string(s));
      }
  std::vector<FieldSample> samples(pts.size());
  detail::parallel_for(pts.size(), [&](std::size_t i) {
    samples[i] = superpose(eval, sources, std::span<const Vec3>(&pts[i], 1)).front();
  });
  detail::emit(o.out, out, [&](std::ostream& os) {
    os << "x,y,z,u1,u2,u3,phi\n";
    for (const auto& s : samples) {
      os << detail::format_double(s.position[0]) << ',' << detail::format_double(s.position[1]) << ','
         << detail::format_double(s.position[2]);
      for (double v : s.U) os << ',' << detail::format_double(v);
      os << '\n';
    }
  });
  return kExitOk;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Electroelastic Green's function of hexagonal piezoelectrics", "piezogreen"};
  app.require_subcommand(1);
  Options o;

  auto* roots = app.add_subcommand("roots", "cubic coefficients, characteristic roots, degeneracy gap");
  roots->add_option("--material", o.material, "material file")->required();
  roots->add_option("--point", o.point, "x,y,z for the |s_l| diagnostic")->capture_default_str();

  auto* ev = app.add_subcommand("eval", "Green's matrix at one point");
  ev->add_option("--material", o.material, "material file")->required();
  ev->add_option("--point", o.point, "x,y,z in m")->required();
  ev->add_option("--repr", o.repr, "cart or cyl")->check(CLI::IsMember({"cart", "cyl"}))->capture_default_str();
  ev->add_option("--format", o.format, "csv or pretty")->check(CLI::IsMember({"csv", "pretty"}))->capture_default_str();

  auto* grid = app.add_subcommand("grid", "upper triangle of G on a (rho, z) grid, CSV");
  grid->add_option("--material", o.material, "material file")->required();
  grid->add_option("--axis-plane", o.plane, "sampling plane")->check(CLI::IsMember({"rz"}))->capture_default_str();
  grid->add_option("--rho", o.rho_range, "a:b:n")->required();
  grid->add_option("--z", o.z_range, "c:d:m")->required();
  grid->add_option("--out", o.out, "output CSV (default stdout)");

  auto* val = app.add_subcommand("validate", "closed form against the angular quadrature");
  val->add_option("--material", o.material, "material file")->required();
  val->add_option("--points", o.points, "number of random points")->capture_default_str();
  val->add_option("--nodes", o.nodes, "quadrature nodes")->capture_default_str();
  val->add_option("--seed", o.seed, "random seed")->capture_default_str();

  auto* dec = app.add_subcommand("decoupled", "consistency of the e = 0 limit");
  dec->add_option("--material", o.material, "material file")->required();

  auto* field = app.add_subcommand("field", "displacement and potential from point sources, CSV");
  field->add_option("--material", o.material, "material file")->required();
  field->add_option("--sources", o.sources, "lines `x y z F1 F2 F3 F4`, F4 = -charge")->required();
  field->add_option("--points", o.points_file, "lines `x y z`");
  field->add_option("--point", o.field_points, "x,y,z (repeatable)");
  field->add_option("--out", o.out, "output CSV (default stdout)");

  if (argc <= 1) {
    err << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*roots) return cmd_roots(o, out);
    if (*ev) return cmd_eval(o, out);
    if (*grid) return cmd_grid(o, out);
    if (*val) return cmd_validate(o, out);
    if (*dec) return cmd_decoupled(o, out, err);
    if (*field) return cmd_field(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace piezogreen::cli

#endif  // PIEZOGREEN_TOOLS_CLI_APP_HPP
