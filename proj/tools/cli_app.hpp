#pragma once

// riccati_chirp command-line front end. run() is the whole program; main()
// only forwards argv, so tests drive it in-process.

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <riccati_chirp/riccati_chirp.hpp>

namespace chirp::cli {

enum ExitCode : int {
  kOk = 0,
  kInvariantFailure = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

namespace detail {

struct Options {
  double omega0 = 1.0;
  std::string shift = "0";
  std::string window;
  std::size_t points = 0;
  std::optional<double> exclusion_radius;
  std::string format;
  std::string out;
  std::vector<std::string> tols;
  std::string kinds;
  // integrate
  std::string profile;
  std::string y0 = "1";
  std::string dy0 = "0";
  double t0 = 0.0;
  std::optional<double> t1;
};

// Output of a command before it is released: nothing reaches the caller's
// streams unless the command succeeds or fails an invariant.
struct Result {
  int code = kOk;
  std::string out;
  std::string err;
};

inline std::map<std::string, double> parse_tols(const std::vector<std::string>& items,
                                                const std::set<std::string>& allowed) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw config_error("--tol expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (!allowed.count(name)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw config_error("unknown tolerance '" + name + "' (accepted: " + list + ")");
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !std::isfinite(v) || !(v > 0.0))
      throw config_error("tolerance '" + name + "' needs a finite positive value");
    out[name] = v;
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ','))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

inline OscillatorParams params_of(const Options& o) {
  return OscillatorParams(o.omega0, io::parse_complex(o.shift));
}

inline TimeGrid grid_of(const Options& o, const OscillatorParams& p, double default_eps) {
  double lo = -2.0 * pi, hi = 2.0 * pi;
  if (!o.window.empty()) std::tie(lo, hi) = io::parse_window(o.window);
  if (o.points == 0) throw config_error("--points must be positive");
  return build_grid(p, lo, hi, o.points, o.exclusion_radius.value_or(default_eps));
}

inline ModeOptions mode_options_of(const std::map<std::string, double>& tols) {
  ModeOptions m;
  if (auto it = tols.find("series_tol"); it != tols.end()) m.series_tol = it->second;
  if (auto it = tols.find("max_terms"); it != tols.end()) {
    if (it->second < 1.0 || it->second > 1e9 || it->second != std::floor(it->second))
      throw config_error("max_terms must be an integer in [1, 1e9]");
    m.max_terms = static_cast<std::size_t>(it->second);
  }
  return m;
}

inline bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Evaluates `columns` complex functions on every grid time (in parallel),
// renders the finite rows and counts the others.
template <class Eval>
io::Table sample_table(const std::vector<double>& times,
                       const std::vector<std::string>& names, const Eval& eval) {
  const std::size_t n = times.size(), k = names.size();
  std::vector<complex> values(n * k);
  parallel_for(n, thread_count_from_env(), [&](std::size_t i) {
    for (std::size_t j = 0; j < k; ++j) values[i * k + j] = eval(j, times[i]);
  });
  io::Table t;
  t.columns.push_back("t");
  for (const auto& name : names) {
    t.columns.push_back(name + "_re");
    t.columns.push_back(name + "_im");
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < k; ++j) ok = ok && finite(values[i * k + j]);
    if (!ok) {
      ++t.dropped;
      continue;
    }
    std::vector<std::string> row{io::format_number(times[i])};
    for (std::size_t j = 0; j < k; ++j) {
      row.push_back(io::format_number(values[i * k + j].real()));
      row.push_back(io::format_number(values[i * k + j].imag()));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string render(const io::Table& t, const std::string& format,
                          const std::vector<bool>& numeric = {}) {
  std::ostringstream os;
  if (format == "json") {
    if (numeric.empty())
      io::write_json(os, t);
    else
      io::write_json(os, t, numeric);
  } else {
    io::write_csv(os, t);
  }
  return os.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !(f << content) || !(f.flush()))
    throw config_error("cannot write '" + path.string() + "'");
}

// stdout, or <out>/<stem>.<format> when --out is given.
inline void emit(Result& r, const Options& o, const std::string& stem,
                 const std::string& content) {
  if (o.out.empty()) {
    r.out += content;
    return;
  }
  const auto path = std::filesystem::path(o.out) / (stem + "." + o.format);
  write_file(path, content);
  r.out += path.string() + "\n";
}

inline void note_dropped(Result& r, const io::Table& t) {
  if (t.dropped > 0)
    r.err += "warning: dropped " + std::to_string(t.dropped) +
             " rows with non-finite values\n";
}

inline Result cmd_modes(const Options& o) {
  const auto tols = parse_tols(o.tols, {"series_tol", "max_terms"});
  const OscillatorParams p = params_of(o);
  const TimeGrid grid = grid_of(o, p, default_exclusion_radius(p));
  std::vector<ModeKind> kinds;
  std::vector<std::string> names;
  const auto requested = o.kinds.empty() ? std::vector<std::string>{} : split_list(o.kinds);
  if (requested.empty()) {
    kinds.assign(std::begin(kAllModes), std::end(kAllModes));
  } else {
    for (const auto& s : requested) {
      const auto k = parse_mode_kind(s);
      if (!k) throw config_error("unknown mode kind '" + s + "'");
      kinds.push_back(*k);
    }
  }
  for (auto k : kinds) names.emplace_back(to_string(k));
  const ModeOptions mo = mode_options_of(tols);
  const io::Table t = sample_table(grid.points(), names,
                                   [&](std::size_t j, double x) { return mode(kinds[j], p, x, mo); });
  Result r;
  note_dropped(r, t);
  emit(r, o, "modes", render(t, o.format));
  return r;
}

inline constexpr double kFigureExclusionRadius = 5e-4;
inline constexpr std::size_t kFigurePoints = 2000;

inline Result cmd_figures(const Options& o) {
  const auto tols = parse_tols(o.tols, {"series_tol", "max_terms"});
  const ModeOptions mo = mode_options_of(tols);
  struct Fig {
    const char* file;
    double s;
    ModeKind a, b;
  };
  const Fig figs[] = {{"fig1.csv", 5.0, ModeKind::U1, ModeKind::U2},
                      {"fig2.csv", 5.0, ModeKind::V1, ModeKind::V2},
                      {"fig3.csv", 6.0, ModeKind::U1, ModeKind::U2},
                      {"fig4.csv", 6.0, ModeKind::V1, ModeKind::V2}};
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  Result r;
  const std::filesystem::path dir = o.out.empty() ? "." : o.out;
  for (const auto& f : figs) {
    const OscillatorParams p(o.omega0, complex(0.0, f.s * o.omega0));
    const TimeGrid grid = grid_of(o, p, kFigureExclusionRadius);
    const ModeKind kinds[] = {f.a, f.b};
    const io::Table t =
        sample_table(grid.points(), {to_string(f.a), to_string(f.b)},
                     [&](std::size_t j, double x) { return mode(kinds[j], p, x, mo); });
    note_dropped(r, t);
    files.emplace_back(dir / f.file, render(t, "csv"));
  }
  for (const auto& [path, content] : files) {
    write_file(path, content);
    r.out += path.string() + "\n";
  }
  return r;
}

inline Result cmd_check(const Options& o) {
  Thresholds th;
  std::set<std::string> allowed;
  for (const auto& [name, v] : th.all()) allowed.insert(name);
  for (const auto& [name, v] : parse_tols(o.tols, allowed)) th.set(name, v);
  const OscillatorParams p = params_of(o);
  SuiteConfig cfg;
  if (!o.window.empty()) std::tie(cfg.lo, cfg.hi) = io::parse_window(o.window);
  if (o.points == 0) throw config_error("--points must be positive");
  cfg.points = o.points;
  cfg.exclusion_radius = o.exclusion_radius;
  cfg.thresholds = th;
  cfg.threads = thread_count_from_env();
  const auto rows = run_invariant_suite(p, cfg);

  io::Table t;
  t.columns = {"name", "status", "max_deviation", "threshold", "worst_t", "detail"};
  for (const auto& row : rows) {
    if (!row.report) {
      t.rows.push_back({row.name, "SKIP", "", "", "", row.skipped});
      continue;
    }
    const auto& rep = *row.report;
    t.rows.push_back({row.name, rep.passed ? "PASS" : "FAIL",
                      io::format_number(rep.max_abs_deviation), io::format_number(rep.threshold),
                      std::isnan(rep.worst_t) ? "" : io::format_number(rep.worst_t),
                      (rep.expect_above ? "must exceed threshold; " : "") + rep.grid});
  }
  Result r;
  if (o.format == "text") {
    std::ostringstream os;
    const Classification c = classify(p);
    os << "omega0=" << io::format_compact(p.omega0()) << " S=" << io::format_compact(p.shift())
       << " " << to_string(c.verdict) << "\n";
    char buf[256];
    auto sci = [](const std::string& cell) {
      if (cell.empty()) return std::string("-");
      char b[32];
      std::snprintf(b, sizeof b, "%.3e", std::stod(cell));
      return std::string(b);
    };
    for (const auto& row : t.rows) {
      std::snprintf(buf, sizeof buf, "%-38s %-4s %-10s %-10s %s\n", row[0].c_str(),
                    row[1].c_str(), sci(row[2]).c_str(), sci(row[3]).c_str(), row[5].c_str());
      os << buf;
    }
    emit(r, o, "check", os.str());
  } else {
    emit(r, o, "check", render(t, o.format, {false, false, true, true, true, false}));
  }
  r.code = all_passed(rows) ? kOk : kInvariantFailure;
  return r;
}

inline std::string classification_line(const OscillatorParams& p) {
  const Classification c = classify(p);
  std::string line = to_string(c.verdict);
  if (c.witness_m) line += " m=" + std::to_string(*c.witness_m);
  // Omega_S is only a frequency when it is real.
  if (c.verdict != Verdict::Unbounded)
    line += " Omega_S=" + io::format_compact(p.quasi_frequency());
  return line;
}

inline Result cmd_classify(const Options& o) {
  Result r;
  r.out = classification_line(params_of(o)) + "\n";
  return r;
}

inline Result cmd_integrate(const Options& o) {
  const auto tols = parse_tols(o.tols, {"rtol", "atol"});
  const OscillatorParams p = params_of(o);
  const auto kind = parse_profile_kind(o.profile);
  if (!kind) throw config_error("unknown profile '" + o.profile + "'");
  if (!o.t1) throw config_error("--t1 is required");
  if (o.points == 0) throw config_error("--points must be positive");
  const double rtol = tols.count("rtol") ? tols.at("rtol") : 1e-10;
  const double atol = tols.count("atol") ? tols.at("atol") : 1e-12;
  const IVP ivp{*kind, p, io::parse_complex(o.y0), io::parse_complex(o.dy0), o.t0, *o.t1};
  ivp.validate();
  std::vector<double> times;
  for (std::size_t i = 1; i <= o.points; ++i)
    times.push_back(i == o.points ? ivp.t1
                                  : ivp.t0 + (ivp.t1 - ivp.t0) * static_cast<double>(i) /
                                                 static_cast<double>(o.points));
  const Trace tr = integrate(ivp, rtol, atol, times);
  io::Table t;
  t.columns = {"t", "y_re", "y_im", "dy_re", "dy_im"};
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    t.rows.push_back({io::format_number(tr.times[i]), io::format_number(tr.values[i].real()),
                      io::format_number(tr.values[i].imag()),
                      io::format_number(tr.derivatives[i].real()),
                      io::format_number(tr.derivatives[i].imag())});
  Result r;
  emit(r, o, "integrate", render(t, o.format));
  return r;
}

inline Result cmd_profiles(const Options& o) {
  parse_tols(o.tols, {});
  const OscillatorParams p = params_of(o);
  const TimeGrid grid = grid_of(o, p, default_exclusion_radius(p));
  enum class Col { Profile, PumpH, PumpG };
  struct Column {
    std::string name;
    Col col;
    ProfileKind kind;
  };
  std::vector<Column> cols;
  if (o.kinds.empty()) {
    for (auto k : kAllProfiles)
      if (!requires_imaginary_shift(k) || p.purely_imaginary_shift())
        cols.push_back({to_string(k), Col::Profile, k});
    if (p.purely_imaginary_shift()) {
      cols.push_back({"pump_h", Col::PumpH, {}});
      if (p.s() != 0.0) cols.push_back({"pump_g", Col::PumpG, {}});
    }
  } else {
    for (const auto& s : split_list(o.kinds)) {
      if (s == "pump_h") {
        require_imaginary_shift(p, "pump_h");
        cols.push_back({s, Col::PumpH, {}});
      } else if (s == "pump_g") {
        require_imaginary_shift(p, "pump_g");
        if (p.s() == 0.0) throw config_error("pump_g is undefined for s = 0");
        cols.push_back({s, Col::PumpG, {}});
      } else if (const auto k = parse_profile_kind(s)) {
        if (requires_imaginary_shift(*k)) require_imaginary_shift(p, s.c_str());
        cols.push_back({s, Col::Profile, *k});
      } else {
        throw config_error("unknown profile '" + s + "'");
      }
    }
  }
  std::vector<std::string> names;
  for (const auto& c : cols) names.push_back(c.name);
  const io::Table t = sample_table(grid.points(), names, [&](std::size_t j, double x) {
    switch (cols[j].col) {
      case Col::PumpH: return pump_h(p, x);
      case Col::PumpG: return pump_g(p, x);
      case Col::Profile: break;
    }
    return freq_sq(cols[j].kind, p, x);
  });
  Result r;
  note_dropped(r, t);
  emit(r, o, "profiles", render(t, o.format));
  return r;
}

}  // namespace detail

/// Runs the program on `args` (without the program name). Everything a
/// command prints is buffered, so a failing command leaves no partial
/// output behind.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::Options;
  CLI::App app{"Constant-shifted Riccati chirp oscillators: closed-form modes, checks and data",
               "riccati_chirp"};
  app.require_subcommand(1);
  Options o;

  auto physics = [&](CLI::App* c, bool shift) {
    c->add_option("--omega0", o.omega0, "natural frequency omega0 > 0")->capture_default_str();
    if (shift) c->add_option("--shift", o.shift, "complex shift S, e.g. 5i, 0+5i, 0.3")->capture_default_str();
  };
  auto gridopts = [&](CLI::App* c, const char* points_help) {
    c->add_option("--window", o.window, "time window lo,hi (default -2pi,2pi)");
    c->add_option("--points", o.points, points_help);
    c->add_option("--exclusion-radius", o.exclusion_radius,
                  "distance kept from every pole of tan(omega0 t) (default 1e-2 pi/omega0)");
  };
  auto formats = [&](CLI::App* c, std::vector<std::string> allowed, const char* help) {
    c->add_option("--format", o.format, help)->check(CLI::IsMember(allowed));
  };
  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "write into this directory instead of stdout");
    c->add_option("--tol", o.tols, "NAME=VALUE (repeatable)")->take_all();
  };

  auto* modes = app.add_subcommand("modes", "tabulate closed-form modes on a grid");
  physics(modes, true);
  gridopts(modes, "number of grid points (default 400)");
  formats(modes, {"csv", "json"}, "csv (default) or json");
  common(modes);
  modes->add_option("--kinds", o.kinds, "comma-separated subset of u1,u2,v1,v2,U1,U2,V1,V2");

  auto* figures = app.add_subcommand("figures", "write fig1.csv..fig4.csv (S = 5i and 6i, scaled by omega0)");
  physics(figures, false);
  figures->add_option("--window", o.window, "time window lo,hi (default -2pi,2pi)");
  figures->add_option("--points", o.points, "number of grid points (default 2000)");
  figures->add_option("--exclusion-radius", o.exclusion_radius,
                      "distance kept from every pole (default 5e-4)");
  common(figures);

  auto* check = app.add_subcommand("check", "run the invariant suite");
  physics(check, true);
  gridopts(check, "number of grid points (default 400)");
  formats(check, {"text", "csv", "json"}, "text (default), csv or json");
  common(check);

  auto* classify_cmd = app.add_subcommand("classify", "periodicity / boundedness verdict");
  physics(classify_cmd, true);

  auto* integrate_cmd = app.add_subcommand("integrate", "integrate y'' + Omega^2 y = 0");
  physics(integrate_cmd, true);
  integrate_cmd->add_option("--profile", o.profile, "frequency profile name")->required();
  integrate_cmd->add_option("--y0", o.y0, "initial value (complex)")->capture_default_str();
  integrate_cmd->add_option("--dy0", o.dy0, "initial derivative (complex)")->capture_default_str();
  integrate_cmd->add_option("--t0", o.t0, "start time")->capture_default_str();
  integrate_cmd->add_option("--t1", o.t1, "end time")->required();
  integrate_cmd->add_option("--points", o.points, "number of output times (default 100)");
  formats(integrate_cmd, {"csv", "json"}, "csv (default) or json");
  common(integrate_cmd);

  auto* profiles = app.add_subcommand("profiles", "tabulate Omega^2(t) profiles and pumps");
  physics(profiles, true);
  gridopts(profiles, "number of grid points (default 400)");
  formats(profiles, {"csv", "json"}, "csv (default) or json");
  common(profiles);
  profiles->add_option("--kinds", o.kinds, "comma-separated profile names, pump_h, pump_g");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  auto defaults = [&](CLI::App* c, std::size_t points, const char* format) {
    if (c->count("--points") == 0) o.points = points;
    if (o.format.empty()) o.format = format;
  };
  detail::Result r;
  try {
    if (modes->parsed()) {
      defaults(modes, 400, "csv");
      r = detail::cmd_modes(o);
    } else if (figures->parsed()) {
      defaults(figures, detail::kFigurePoints, "csv");
      r = detail::cmd_figures(o);
    } else if (check->parsed()) {
      defaults(check, 400, "text");
      r = detail::cmd_check(o);
    } else if (classify_cmd->parsed()) {
      r = detail::cmd_classify(o);
    } else if (integrate_cmd->parsed()) {
      defaults(integrate_cmd, 100, "csv");
      r = detail::cmd_integrate(o);
    } else if (profiles->parsed()) {
      defaults(profiles, 400, "csv");
      r = detail::cmd_profiles(o);
    }
  } catch (const config_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const singularity_error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const numerical_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  out << r.out;
  err << r.err;
  return r.code;
}

}  // namespace chirp::cli
