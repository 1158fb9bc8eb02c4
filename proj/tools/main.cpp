// Command-line front end for the teleportation fidelity library.
//
// Subcommands: fidelity, sweep, critical-time, critical-omega, critical-t0,
// fit, verify, compare.  Tables are CSV (or JSON) with a header row, values
// printed to nine significant digits, LF line endings, no timestamps; reruns
// are byte identical.  Exit codes: 0 success, 1 usage error, 2 numerical
// failure, 3 verification failure.

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <locale>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reference_table.hpp"
#include "telesim/telesim.hpp"

namespace {

using json = nlohmann::ordered_json;
using telesim::EnvironmentKind;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 9);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
}

int parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

Grid parse_grid(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("bad grid '" + s + "' (expected lo:hi:n)");
  Grid g{parse_double(parts[0]), parse_double(parts[1]), parse_int(parts[2])};
  if (g.n < 0) throw std::invalid_argument("grid point count must be >= 0");
  return g;
}

std::pair<double, double> parse_window(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 2)
    throw std::invalid_argument("bad window '" + s + "' (expected lo:hi)");
  return {parse_double(parts[0]), parse_double(parts[1])};
}

std::vector<EnvironmentKind> parse_kind_list(const std::string& s) {
  std::vector<EnvironmentKind> kinds;
  for (const auto& name : split(s, ','))
    kinds.push_back(telesim::environment_from_string(name));
  return kinds;
}

enum class Method { closed, numeric, both };

Method parse_method(const std::string& s) {
  if (s == "closed") return Method::closed;
  if (s == "numeric") return Method::numeric;
  if (s == "both") return Method::both;
  throw std::invalid_argument("bad method '" + s +
                              "' (expected closed, numeric, or both)");
}

telesim::QuadratureSpec parse_quadrature(const std::string& s) {
  telesim::QuadratureSpec quad;
  if (s == "octahedral") return quad;
  if (s == "dense") {
    quad.kind = telesim::QuadratureKind::dense;
    return quad;
  }
  throw std::invalid_argument("bad quadrature '" + s +
                              "' (expected octahedral or dense)");
}

// ---------------------------------------------------------------- tables --

using Cell = std::variant<std::string, double>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (i) out += ',';
    out += t.header[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const auto* s = std::get_if<std::string>(&row[i]))
        out += *s;
      else
        out += fmt9(std::get<double>(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& t) {
  json arr = json::array();
  for (const auto& row : t.rows) {
    json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* s = std::get_if<std::string>(&row[i]))
        obj[t.header[i]] = *s;
      else
        obj[t.header[i]] = std::get<double>(row[i]);
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string render_table(const Table& t, const std::string& format) {
  if (format.empty() || format == "csv") return render_csv(t);
  if (format == "json") return render_json(t);
  throw std::invalid_argument("bad format '" + format +
                              "' (expected csv or json)");
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(output_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + output_path);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file: " + output_path);
}

// ------------------------------------------------------------- threading --

template <typename Fn>
void parallel_index(int n, int threads, Fn&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure = nullptr;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n && !stop.load(); i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          stop = true;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

// -------------------------------------------------------------- commands --

struct Opts {
  std::string channel;
  std::string recovery;
  double gamma = 0.0;
  double omega = 0.0;
  double t = 0.0;
  double t0 = 0.0;
  std::string method = "closed";
  std::string quadrature = "octahedral";
  std::string axis;
  std::string grid;
  std::string omega_grid;
  std::string t0_grid;
  std::string window;
  std::string output;
  std::string format;
  std::string section = "all";
  double omega_scale = 1.0e4;
  bool sensitivity = true;
  bool quick = false;
  bool inject_fault = false;
  bool verbose = false;
  int points = 0;
  int threads = 0;
  double two_path_tol = 1e-6;
  double target_error = 1e-9;
};

double numeric_fidelity(EnvironmentKind alpha, EnvironmentKind beta, double gamma,
                        double omega, double t, double t0,
                        const telesim::QuadratureSpec& quad, double target_error,
                        bool verbose = false) {
  telesim::IntegratorConfig cfg;
  cfg.target_error = target_error;
  const auto ch = telesim::channel_state_numeric(alpha, gamma, t0, cfg);
  const telesim::RecoveryConfig rec{beta, gamma, omega, t};
  const auto rep = telesim::average_fidelity(ch, rec, quad, cfg);
  if (verbose) {
    for (const auto& s : rep.samples) {
      std::fprintf(stderr, "sample theta=%s phi=%s", fmt9(s.angles.theta).c_str(),
                   fmt9(s.angles.phi).c_str());
      for (int m = 0; m < 4; ++m)
        std::fprintf(stderr, " p%d=%s f%d=%s", m, fmt9(s.probability[m]).c_str(),
                     m, fmt9(s.fidelity[m]).c_str());
      std::fprintf(stderr, "\n");
    }
  }
  return rep.average;
}

int cmd_fidelity(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto beta = telesim::environment_from_string(o.recovery);
  const auto method = parse_method(o.method);
  const auto quad = parse_quadrature(o.quadrature);

  Table tb;
  tb.header = {"alpha", "beta", "gamma", "omega", "t", "t0", "method", "F"};
  auto add_row = [&](const char* tag, double f) {
    tb.rows.push_back({std::string(telesim::to_string(alpha)),
                       std::string(telesim::to_string(beta)), o.gamma, o.omega,
                       o.t, o.t0, std::string(tag), f});
  };

  double f_closed = 0.0, f_numeric = 0.0;
  if (method != Method::numeric) {
    f_closed = telesim::fidelity_closed(alpha, beta, o.gamma, o.omega, o.t, o.t0);
    add_row("closed", f_closed);
  }
  if (method != Method::closed) {
    f_numeric = numeric_fidelity(alpha, beta, o.gamma, o.omega, o.t, o.t0, quad,
                                 o.target_error, o.verbose);
    add_row("numeric", f_numeric);
  }
  emit(render_table(tb, o.format), o.output);

  if (method == Method::both) {
    const double gap = std::abs(f_closed - f_numeric);
    if (!(gap <= o.two_path_tol))
      throw std::runtime_error("computation paths disagree by " + fmt9(gap) +
                               " (allowed " + fmt9(o.two_path_tol) + ")");
  }
  return 0;
}

int cmd_sweep(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto betas = parse_kind_list(o.recovery);
  const auto method = parse_method(o.method);
  if (method == Method::both)
    throw std::invalid_argument("sweep method must be closed or numeric");
  const auto quad = parse_quadrature(o.quadrature);
  if (o.axis != "t" && o.axis != "omega" && o.axis != "t0" && o.axis != "gamma")
    throw std::invalid_argument("bad axis '" + o.axis +
                                "' (expected t, omega, t0, or gamma)");
  const Grid g = parse_grid(o.grid);
  const auto values = g.n ? telesim::linspace(g.lo, g.hi, g.n) : std::vector<double>{};

  telesim::IntegratorConfig cfg;
  cfg.target_error = o.target_error;

  Table tb;
  tb.header = {"axis", "value", "F"};
  for (const auto beta : betas) {
    // The pair-distribution state is fixed when the axis leaves gamma and t0
    // alone, so evolve it once per block.
    std::optional<telesim::ChannelState> fixed;
    if (method == Method::numeric && (o.axis == "t" || o.axis == "omega"))
      fixed = telesim::channel_state_numeric(alpha, o.gamma, o.t0, cfg);

    std::vector<double> fs(values.size());
    parallel_index(static_cast<int>(values.size()), o.threads, [&](int i) {
      double gamma = o.gamma, omega = o.omega, t = o.t, t0 = o.t0;
      if (o.axis == "t") t = values[i];
      else if (o.axis == "omega") omega = values[i];
      else if (o.axis == "t0") t0 = values[i];
      else gamma = values[i];
      if (method == Method::closed) {
        fs[i] = telesim::fidelity_closed(alpha, beta, gamma, omega, t, t0);
      } else if (fixed) {
        const telesim::RecoveryConfig rec{beta, gamma, omega, t};
        fs[i] = telesim::average_fidelity(*fixed, rec, quad, cfg).average;
      } else {
        fs[i] = numeric_fidelity(alpha, beta, gamma, omega, t, t0, quad,
                                 o.target_error);
      }
    });
    for (std::size_t i = 0; i < values.size(); ++i)
      tb.rows.push_back({o.axis, values[i], fs[i]});
  }
  emit(render_table(tb, o.format), o.output);
  return 0;
}

int cmd_critical_time(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto betas = parse_kind_list(o.recovery);
  const auto method = parse_method(o.method);
  if (method == Method::both)
    throw std::invalid_argument("critical-time method must be closed or numeric");

  std::vector<double> omegas;
  if (!o.omega_grid.empty()) {
    const Grid g = parse_grid(o.omega_grid);
    if (g.n) omegas = telesim::linspace(g.lo, g.hi, g.n);
  } else {
    omegas.push_back(o.omega);
  }

  telesim::IntegratorConfig cfg;
  cfg.target_error = o.target_error;

  Table tb;
  tb.header = {"axis", "value", "t_c", "f_max"};
  for (const auto beta : betas) {
    std::optional<telesim::ChannelState> fixed;
    if (method == Method::numeric)
      fixed = telesim::channel_state_numeric(alpha, o.gamma, o.t0, cfg);

    std::vector<telesim::CriticalTimeResult> res(omegas.size());
    parallel_index(static_cast<int>(omegas.size()), o.threads, [&](int i) {
      res[i] = method == Method::closed
                   ? telesim::critical_time_closed(alpha, beta, o.gamma,
                                                   omegas[i], o.t0)
                   : telesim::critical_time_numeric(*fixed, beta, o.gamma,
                                                    omegas[i], cfg);
    });
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const auto& r = res[i];
      tb.rows.push_back({std::string("omega"), omegas[i], r.t_c, r.f_max});
      if (r.boundary)
        std::fprintf(stderr, "note: best time sits on the scan edge at omega=%s\n",
                     fmt9(omegas[i]).c_str());
      if (!r.competing.empty())
        std::fprintf(stderr,
                     "note: %zu competing maxima within 1e-4 at omega=%s\n",
                     r.competing.size(), fmt9(omegas[i]).c_str());
    }
  }
  emit(render_table(tb, o.format), o.output);
  return 0;
}

int cmd_critical_omega(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto betas = parse_kind_list(o.recovery);

  std::vector<double> t0s;
  if (!o.t0_grid.empty()) {
    const Grid g = parse_grid(o.t0_grid);
    if (g.n) t0s = telesim::linspace(g.lo, g.hi, g.n);
  } else {
    t0s.push_back(o.t0);
  }

  Table tb;
  tb.header = {"alpha", "beta", "gamma", "t0", "omega_c", "f_max_at_omega_c"};
  for (const auto beta : betas) {
    std::vector<telesim::CriticalOmegaResult> res(t0s.size());
    parallel_index(static_cast<int>(t0s.size()), o.threads, [&](int i) {
      res[i] = telesim::critical_omega(alpha, beta, o.gamma, t0s[i]);
    });
    for (std::size_t i = 0; i < t0s.size(); ++i) {
      const auto& r = res[i];
      tb.rows.push_back({std::string(telesim::to_string(alpha)),
                         std::string(telesim::to_string(beta)), o.gamma, t0s[i],
                         r.omega_c ? *r.omega_c : kNaN,
                         r.omega_c ? r.f_max_at_root : kNaN});
    }
  }
  emit(render_table(tb, o.format), o.output);
  return 0;
}

int cmd_critical_t0(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto betas = parse_kind_list(o.recovery);

  Table tb;
  tb.header = {"alpha", "beta", "gamma", "omega_ref", "t0_c", "t0_c_tenth"};
  for (const auto beta : betas) {
    const auto r =
        telesim::critical_t0(alpha, beta, o.gamma, o.omega_scale, o.sensitivity);
    tb.rows.push_back({std::string(telesim::to_string(alpha)),
                       std::string(telesim::to_string(beta)), o.gamma,
                       r.omega_ref, r.t0_c,
                       r.t0_c_tenth ? *r.t0_c_tenth : kNaN});
  }
  emit(render_table(tb, o.format), o.output);
  return 0;
}

int cmd_fit(const Opts& o) {
  const auto alpha = telesim::environment_from_string(o.channel);
  const auto betas = parse_kind_list(o.recovery);
  if (alpha == EnvironmentKind::perfect)
    throw std::invalid_argument(
        "fit needs a disturbed channel; the critical rate is flat otherwise");

  double wlo = 0.0, whi = 0.0;
  if (!o.window.empty()) {
    std::tie(wlo, whi) = parse_window(o.window);
  } else {
    const int idx = alpha == EnvironmentKind::dissipative ? 0
                    : alpha == EnvironmentKind::noisy     ? 1
                                                          : 2;
    wlo = telesim_cli::refdetail::kFitWindow[idx][0];
    whi = telesim_cli::refdetail::kFitWindow[idx][1];
  }
  const int points = o.points ? o.points : 40;
  if (points < 8) throw std::invalid_argument("fit needs at least 8 points");
  if (!(whi > wlo)) throw std::invalid_argument("fit window must have lo < hi");

  Table tb;
  tb.header = {"alpha", "beta", "a", "b",
               "c",     "d",    "rms", "window_lo", "window_hi"};
  const auto t0s = telesim::linspace(wlo, whi, points);
  for (const auto beta : betas) {
    std::vector<double> wc(t0s.size(), kNaN);
    parallel_index(static_cast<int>(t0s.size()), o.threads, [&](int i) {
      const auto r = telesim::critical_omega(alpha, beta, o.gamma, t0s[i]);
      if (r.omega_c) wc[i] = *r.omega_c;
    });
    for (std::size_t i = 0; i < wc.size(); ++i)
      if (std::isnan(wc[i]))
        throw std::runtime_error("no critical rotation rate at t0=" +
                                 fmt9(t0s[i]));
    const auto [lo_it, hi_it] = std::minmax_element(wc.begin(), wc.end());
    if (*hi_it - *lo_it < 1e-12)
      throw std::runtime_error("critical-rate curve is flat; nothing to fit");

    const auto fit = telesim::fit_double_exponential(t0s, wc);
    tb.rows.push_back({std::string(telesim::to_string(alpha)),
                       std::string(telesim::to_string(beta)), fit.a, fit.b,
                       fit.c, fit.d, fit.rms, wlo, whi});
  }
  emit(render_table(tb, o.format), o.output);
  return 0;
}

int cmd_verify(const Opts& o) {
  telesim::VerifyOptions vo;
  vo.quick = o.quick;
  vo.inject_fault = o.inject_fault;
  const auto checks = telesim::run_verification(vo);

  json doc;
  doc["quick"] = o.quick;
  doc["inject_fault"] = o.inject_fault;
  json arr = json::array();
  for (const auto& c : checks) {
    json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["measured"] = c.measured;
    row["tolerance"] = c.tolerance;
    row["note"] = c.note;
    arr.push_back(std::move(row));
  }
  doc["checks"] = std::move(arr);
  const bool ok = telesim::all_passed(checks);
  doc["all_passed"] = ok;
  emit(doc.dump(2) + "\n", o.output);
  return ok ? 0 : 3;
}

int cmd_compare(const Opts& o) {
  const int points = o.points ? o.points : 15;
  const auto rows = telesim_cli::reference_rows(o.section, points);

  std::string out;
  if (o.format.empty() || o.format == "markdown") {
    out += "| quantity | published | computed | abs. dev. | rel. dev. | where |\n";
    out += "| --- | --- | --- | --- | --- | --- |\n";
    for (const auto& r : rows) {
      const double abs_dev = std::abs(r.computed - r.published_value);
      const double rel_dev = abs_dev / std::abs(r.published_value);
      out += "| " + r.quantity + " | " + r.published + " | " + fmt9(r.computed) +
             " | " + fmt9(abs_dev) + " | " + fmt9(rel_dev) + " | " + r.where +
             " |\n";
    }
  } else if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      const double abs_dev = std::abs(r.computed - r.published_value);
      json row;
      row["quantity"] = r.quantity;
      row["where"] = r.where;
      row["published"] = r.published_value;
      row["computed"] = r.computed;
      row["absolute_deviation"] = abs_dev;
      row["relative_deviation"] = abs_dev / std::abs(r.published_value);
      arr.push_back(std::move(row));
    }
    out = arr.dump(2) + "\n";
  } else {
    throw std::invalid_argument("bad format '" + o.format +
                                "' (expected markdown or json)");
  }
  emit(out, o.output);
  return 0;
}

// ------------------------------------------------------------------ main --

void add_physics_options(CLI::App* cmd, Opts& o, bool recovery_list) {
  cmd->add_option("--channel", o.channel, "pair-distribution environment")
      ->envname("TELEPORT_CHANNEL")
      ->required();
  cmd->add_option("--recovery", o.recovery,
                  recovery_list ? "recovery environment (comma list allowed)"
                                : "recovery environment")
      ->envname("TELEPORT_RECOVERY")
      ->required();
  cmd->add_option("--gamma", o.gamma, "environment coupling rate")
      ->envname("TELEPORT_GAMMA");
}

}  // namespace

int main(int argc, char** argv) {
  std::locale::global(std::locale::classic());
  Opts o;
  int code = 0;

  CLI::App app{"one-qubit teleportation under disturbed pair distribution "
               "and disturbed recovery rotations"};
  app.require_subcommand(1);

  auto* fid = app.add_subcommand(
      "fidelity", "average teleportation fidelity at one parameter point");
  add_physics_options(fid, o, false);
  fid->add_option("--omega", o.omega, "recovery rotation rate")->envname("TELEPORT_OMEGA");
  fid->add_option("--t", o.t, "recovery pulse duration")->envname("TELEPORT_T");
  fid->add_option("--t0", o.t0, "channel exposure time")->envname("TELEPORT_T0");
  fid->add_option("--method", o.method, "closed, numeric, or both")
      ->envname("TELEPORT_METHOD");
  fid->add_option("--quadrature", o.quadrature, "octahedral or dense");
  fid->add_option("--two-path-tol", o.two_path_tol,
                  "allowed closed/numeric disagreement for --method both");
  fid->add_option("--target-error", o.target_error, "integrator accuracy goal");
  fid->add_flag("--verbose", o.verbose, "per-sample detail on stderr");
  fid->add_option("--output", o.output, "write the table to this file instead of stdout");
  fid->add_option("--format", o.format, "csv or json");
  fid->callback([&] { code = cmd_fidelity(o); });

  auto* sw = app.add_subcommand("sweep", "fidelity along one parameter axis");
  add_physics_options(sw, o, true);
  sw->add_option("--omega", o.omega, "recovery rotation rate")->envname("TELEPORT_OMEGA");
  sw->add_option("--t", o.t, "recovery pulse duration")->envname("TELEPORT_T");
  sw->add_option("--t0", o.t0, "channel exposure time")->envname("TELEPORT_T0");
  sw->add_option("--axis", o.axis, "swept parameter: t, omega, t0, or gamma")->required();
  sw->add_option("--grid", o.grid, "lo:hi:n inclusive grid")->required();
  sw->add_option("--method", o.method, "closed or numeric")->envname("TELEPORT_METHOD");
  sw->add_option("--quadrature", o.quadrature, "octahedral or dense");
  sw->add_option("--target-error", o.target_error, "integrator accuracy goal");
  sw->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->envname("TELEPORT_THREADS");
  sw->add_option("--output", o.output, "write the table to this file instead of stdout");
  sw->add_option("--format", o.format, "csv or json");
  sw->callback([&] { code = cmd_sweep(o); });

  auto* ct = app.add_subcommand(
      "critical-time", "best recovery duration and the fidelity it reaches");
  add_physics_options(ct, o, true);
  ct->add_option("--omega", o.omega, "recovery rotation rate")->envname("TELEPORT_OMEGA");
  ct->add_option("--omega-grid", o.omega_grid, "lo:hi:n grid of rotation rates");
  ct->add_option("--t0", o.t0, "channel exposure time")->envname("TELEPORT_T0");
  ct->add_option("--method", o.method, "closed or numeric")->envname("TELEPORT_METHOD");
  ct->add_option("--target-error", o.target_error, "integrator accuracy goal");
  ct->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->envname("TELEPORT_THREADS");
  ct->add_option("--output", o.output, "write the table to this file instead of stdout");
  ct->add_option("--format", o.format, "csv or json");
  ct->callback([&] { code = cmd_critical_time(o); });

  auto* co = app.add_subcommand(
      "critical-omega", "smallest rotation rate that recovers F = 2/3");
  add_physics_options(co, o, true);
  co->add_option("--t0", o.t0, "channel exposure time")->envname("TELEPORT_T0");
  co->add_option("--t0-grid", o.t0_grid, "lo:hi:n grid of exposure times");
  co->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->envname("TELEPORT_THREADS");
  co->add_option("--output", o.output, "write the table to this file instead of stdout");
  co->add_option("--format", o.format, "csv or json");
  co->callback([&] { code = cmd_critical_omega(o); });

  auto* c0 = app.add_subcommand(
      "critical-t0", "longest exposure after which no rotation rate recovers F = 2/3");
  add_physics_options(c0, o, true);
  c0->add_option("--omega-scale", o.omega_scale,
                 "reference rate as a multiple of gamma");
  c0->add_flag("--sensitivity,!--no-sensitivity", o.sensitivity,
               "also solve at one tenth of the reference rate");
  c0->add_option("--output", o.output, "write the table to this file instead of stdout");
  c0->add_option("--format", o.format, "csv or json");
  c0->callback([&] { code = cmd_critical_t0(o); });

  auto* ft = app.add_subcommand(
      "fit", "double-exponential fit of the critical rate versus exposure");
  add_physics_options(ft, o, true);
  ft->add_option("--window", o.window, "lo:hi exposure window (default per channel)");
  ft->add_option("--points", o.points, "grid points inside the window (default 40)");
  ft->add_option("--threads", o.threads, "worker threads (0 = all cores)")
      ->envname("TELEPORT_THREADS");
  ft->add_option("--output", o.output, "write the table to this file instead of stdout");
  ft->add_option("--format", o.format, "csv or json");
  ft->callback([&] { code = cmd_fit(o); });

  auto* vf = app.add_subcommand("verify", "self-check of every module, JSON report");
  vf->add_flag("--quick", o.quick, "smaller grids, a few seconds total");
  vf->add_flag("--inject-fault", o.inject_fault,
               "corrupt one internal rate; cross checks must then fail");
  vf->add_option("--output", o.output, "write the report to this file instead of stdout");
  vf->callback([&] { code = cmd_verify(o); });

  auto* cp = app.add_subcommand(
      "compare", "computed values next to the published reference numbers");
  cp->add_option("--section", o.section, "all, fmax, omegac, t0c, esd, or fits");
  cp->add_option("--points", o.points, "grid points per fitted curve (default 15)");
  cp->add_option("--format", o.format, "markdown or json");
  cp->add_option("--output", o.output, "write the report to this file instead of stdout");
  cp->callback([&] { code = cmd_compare(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return code;
}
