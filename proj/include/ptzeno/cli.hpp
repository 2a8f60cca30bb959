#pragma once

// Command-line front end: option parsing, dispatch and file output.
// Inputs are in the same units as --j0; every emitted quantity is divided by J0.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptzeno/acceptance.hpp"
#include "ptzeno/evolve.hpp"
#include "ptzeno/floquet.hpp"
#include "ptzeno/report.hpp"
#include "ptzeno/static_analysis.hpp"
#include "ptzeno/sweep.hpp"

namespace ptzeno::cli {

enum class Command { PhaseDiagram, OmegaSweep, StaticSweep, Evolve, Classify, Verify };
enum class Format { Csv, Json };

inline constexpr std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::PhaseDiagram: return "phase-diagram";
    case Command::OmegaSweep: return "omega-sweep";
    case Command::StaticSweep: return "static-sweep";
    case Command::Evolve: return "evolve";
    case Command::Classify: return "classify";
    case Command::Verify: return "verify";
  }
  return "?";
}

struct Params {
  double j0 = 1.0;
  double tau1 = 0.01;
  double gamma0 = 200.0;
  double gamma_min = 0.0;
  double gamma_max = 300.0;
  double omega_min = 0.2;
  double omega_max = 4.0;
  std::size_t points = 0;  // 0: default for the command
  std::size_t n_gamma = 256;
  std::size_t n_omega = 256;
  double omega = 2.0;
  int periods = 200;
  int samples = 16;
  std::string initial = "up";
  double discard = 0.5;
};

struct RunConfig {
  Command command = Command::Verify;
  Params params;
  std::string output_path;  // empty: standard output
  Format format = Format::Csv;
};

/// Bad command line or config file. `exit_code` is 2; an explicit help request carries 0.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& what, int code = 2) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

namespace detail {

inline void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw UsageError("--" + key + ": " + what);
}

/// key = value lines; '#' starts a comment.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config: line " + std::to_string(lineno) + " is not of the form key = value");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

inline void validate_physics(const RunConfig& cfg) {
  const Params& p = cfg.params;
  const auto finite_pos = [](double x) { return std::isfinite(x) && x > 0.0; };
  require(finite_pos(p.j0), "j0", "must be > 0");
  const bool uses_tau1 = cfg.command != Command::StaticSweep && cfg.command != Command::Verify;
  if (uses_tau1) require(finite_pos(p.tau1), "tau1", "must be > 0");

  const auto omega_range = [&] {
    require(finite_pos(p.omega_min), "omega-min", "must be > 0");
    require(std::isfinite(p.omega_max) && p.omega_max > p.omega_min, "omega-max", "must exceed omega-min");
    const double ceiling = omega_ceiling(p.tau1);
    require(p.omega_max < ceiling, "omega-max",
            "must be below the admissible ceiling 2*pi/tau1 = " + report::format_double(ceiling) +
                " (the period must exceed tau1)");
  };
  const auto gamma_range = [&] {
    require(std::isfinite(p.gamma_min) && p.gamma_min >= 0.0, "gamma-min", "must be >= 0");
    require(std::isfinite(p.gamma_max) && p.gamma_max > p.gamma_min, "gamma-max", "must exceed gamma-min");
  };
  const auto gamma0 = [&] { require(std::isfinite(p.gamma0) && p.gamma0 >= 0.0, "gamma0", "must be >= 0"); };

  switch (cfg.command) {
    case Command::PhaseDiagram:
      gamma_range();
      omega_range();
      require(p.n_gamma >= 16, "n-gamma", "must be >= 16");
      require(p.n_omega >= 16, "n-omega", "must be >= 16");
      break;
    case Command::OmegaSweep:
    case Command::Classify:
      gamma0();
      omega_range();
      require(p.points == 0 || p.points >= 3, "points", "must be >= 3");
      break;
    case Command::StaticSweep:
      gamma_range();
      require(p.points == 0 || p.points >= 2, "points", "must be >= 2");
      break;
    case Command::Evolve: {
      gamma0();
      require(finite_pos(p.omega), "omega", "must be > 0");
      require(p.omega < omega_ceiling(p.tau1), "omega",
              "must be below the admissible ceiling 2*pi/tau1 = " + report::format_double(omega_ceiling(p.tau1)));
      require(p.periods >= 1, "periods", "must be >= 1");
      require(p.samples >= 2, "samples", "must be >= 2");
      require(p.initial == "up" || p.initial == "down", "initial", "must be 'up' or 'down'");
      require(p.discard >= 0.0 && p.discard < 0.9, "discard", "must lie in [0, 0.9)");
      break;
    }
    case Command::Verify:
      break;
  }
}

}  // namespace detail

/// Parses argv (without the program name). Flags override config-file values, which
/// override defaults. Throws UsageError; help requests carry exit code 0 and the help text.
inline RunConfig parse_config(const std::vector<std::string>& argv) {
  CLI::App app{"Floquet spectra, PT phases and Zeno/anti-Zeno regimes of a two-level system "
               "under square-wave dissipation",
               "ptzeno"};
  app.require_subcommand(0, 1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig cfg;
  Params& p = cfg.params;
  std::string format = "csv";
  std::string config_path;

  const auto common = [&](CLI::App* sub, bool physical, bool output) {
    sub->add_option("--config", config_path, "key = value file; flags given here take precedence");
    sub->add_option("--j0", p.j0, "Coupling J0")->capture_default_str();
    if (physical) sub->add_option("--tau1", p.tau1, "Pulse width tau1")->capture_default_str();
    if (output) {
      sub->add_option("-o,--output", cfg.output_path, "Output file (default: standard output)");
      sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    }
  };
  const auto omega_range = [&](CLI::App* sub) {
    sub->add_option("--omega-min", p.omega_min, "Lowest modulation frequency")->capture_default_str();
    sub->add_option("--omega-max", p.omega_max, "Highest modulation frequency (< 2*pi/tau1)")->capture_default_str();
  };

  auto* pd = app.add_subcommand("phase-diagram", "mu over the (gamma0, omega) plane");
  common(pd, true, true);
  pd->add_option("--gamma-min", p.gamma_min, "Lowest gamma0")->capture_default_str();
  pd->add_option("--gamma-max", p.gamma_max, "Highest gamma0")->capture_default_str();
  omega_range(pd);
  pd->add_option("--n-gamma", p.n_gamma, "gamma0 grid points")->capture_default_str();
  pd->add_option("--n-omega", p.n_omega, "omega grid points")->capture_default_str();

  auto* os = app.add_subcommand("omega-sweep", "Floquet decay rates along omega at fixed gamma0 and tau1");
  common(os, true, true);
  os->add_option("--gamma0", p.gamma0, "Dissipation strength during the pulse")->capture_default_str();
  omega_range(os);
  os->add_option("--points", p.points, "Grid points (default 512 per decade + 1)");

  auto* ss = app.add_subcommand("static-sweep", "Decay rates under continuous dissipation");
  common(ss, false, true);
  ss->add_option("--gamma-min", p.gamma_min, "Lowest gamma0")->default_str("0");
  ss->add_option("--gamma-max", p.gamma_max, "Highest gamma0")->default_str("10");
  ss->add_option("--points", p.points, "Grid points")->default_str("1001");

  auto* ev = app.add_subcommand("evolve", "Time evolution of the amplitudes");
  common(ev, true, true);
  ev->add_option("--gamma0", p.gamma0, "Dissipation strength during the pulse")->capture_default_str();
  ev->add_option("--omega", p.omega, "Modulation frequency")->capture_default_str();
  ev->add_option("--periods", p.periods, "Number of periods")->capture_default_str();
  ev->add_option("--samples", p.samples, "Samples per period")->capture_default_str();
  ev->add_option("--initial", p.initial, "Initial state: up or down")->capture_default_str();
  ev->add_option("--discard", p.discard, "Leading fraction of periods ignored by the lifetime fit")
      ->capture_default_str();

  auto* cl = app.add_subcommand("classify", "EPs, resonance points and QZE/QAZE segments along omega");
  common(cl, true, true);
  cl->add_option("--gamma0", p.gamma0, "Dissipation strength during the pulse")->capture_default_str();
  omega_range(cl);
  cl->add_option("--points", p.points, "Grid points (default 512 per decade + 1)");

  auto* vf = app.add_subcommand("verify", "Run the built-in acceptance checks");
  (void)vf;

  if (argv.empty()) throw UsageError(app.help(), 0);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::CallForAllHelp&) {
    throw UsageError(app.help("", CLI::AppFormatMode::All), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  CLI::App* chosen = nullptr;
  for (auto* sub : app.get_subcommands()) chosen = sub;
  if (!chosen) throw UsageError("a subcommand is required (run without arguments for help)");
  const std::string name = chosen->get_name();
  for (Command c : {Command::PhaseDiagram, Command::OmegaSweep, Command::StaticSweep, Command::Evolve,
                    Command::Classify, Command::Verify})
    if (to_string(c) == name) cfg.command = c;

  if (cfg.command == Command::StaticSweep) {
    if (chosen->get_option("--gamma-max")->count() == 0) p.gamma_max = 10.0;
    if (chosen->get_option("--points")->count() == 0) p.points = 1001;
  }

  if (!config_path.empty()) {
    for (const auto& [key, value] : detail::read_config_file(config_path)) {
      CLI::Option* opt = key == "config" || key == "output" || key == "o" ? nullptr
                                                                           : chosen->get_option_no_throw("--" + key);
      if (!opt) throw UsageError("--config: unknown key '" + key + "' for " + name);
      if (opt->count() > 0) continue;
      try {
        opt->clear();
        opt->add_result(value);
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw UsageError("--" + key + ": " + e.what());
      }
    }
  }

  cfg.format = format == "json" ? Format::Json : Format::Csv;
  detail::validate_physics(cfg);
  return cfg;
}

namespace detail {

struct Output {
  report::Table table;
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
};

inline nlohmann::ordered_json params_json(const RunConfig& cfg) {
  const Params& p = cfg.params;
  nlohmann::ordered_json j;
  j["j0"] = p.j0;
  switch (cfg.command) {
    case Command::PhaseDiagram:
      j["tau1"] = p.tau1;
      j["gamma_min"] = p.gamma_min;
      j["gamma_max"] = p.gamma_max;
      j["omega_min"] = p.omega_min;
      j["omega_max"] = p.omega_max;
      j["n_gamma"] = p.n_gamma;
      j["n_omega"] = p.n_omega;
      break;
    case Command::OmegaSweep:
    case Command::Classify:
      j["tau1"] = p.tau1;
      j["gamma0"] = p.gamma0;
      j["omega_min"] = p.omega_min;
      j["omega_max"] = p.omega_max;
      j["points"] = p.points;
      break;
    case Command::StaticSweep:
      j["gamma_min"] = p.gamma_min;
      j["gamma_max"] = p.gamma_max;
      j["points"] = p.points;
      break;
    case Command::Evolve:
      j["tau1"] = p.tau1;
      j["gamma0"] = p.gamma0;
      j["omega"] = p.omega;
      j["periods"] = p.periods;
      j["samples"] = p.samples;
      j["initial"] = p.initial;
      j["discard"] = p.discard;
      break;
    case Command::Verify:
      break;
  }
  return j;
}

inline std::string no_commas(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

inline std::size_t sweep_points(const Params& p) {
  return p.points ? p.points : default_sweep_points({p.omega_min, p.omega_max});
}

inline Output run_phase_diagram(const RunConfig& cfg) {
  const Params& p = cfg.params;
  const auto d = phase_diagram({p.j0}, p.tau1, {p.gamma_min, p.gamma_max}, {p.omega_min, p.omega_max},
                               {p.n_gamma, p.n_omega});
  Output out;
  out.table.header = {"gamma0_over_j0", "omega_over_j0", "mu", "phase"};
  for (std::size_t i = 0; i < d.gamma0_axis.size(); ++i)
    for (std::size_t k = 0; k < d.omega_axis.size(); ++k)
      out.table.add({d.gamma0_axis[i], d.omega_axis[k], d.mu_grid[i][k], std::string(to_string(d.phase_grid[i][k]))});
  out.notes["omega_ceiling_over_j0"] = omega_ceiling(p.tau1) / p.j0;
  return out;
}

inline Output run_omega_sweep(const RunConfig& cfg) {
  const Params& p = cfg.params;
  const SystemParams sys{p.j0};
  const auto sweep = omega_sweep(sys, p.gamma0, p.tau1, {p.omega_min, p.omega_max}, sweep_points(p));
  const auto seg = classify_zeno(sweep, locate_features(sweep));
  Output out;
  out.table.header = {"omega_over_j0", "gamma_slow", "gamma_fast", "mu", "phase", "zeno_label"};
  for (std::size_t i = 0; i < sweep.omegas.size(); ++i) {
    const auto& s = sweep.spectra[i];
    const Segment* g = seg.segment_at(sweep.omegas[i]);
    out.table.add({sweep.omegas[i] / p.j0, s.gamma_slow / p.j0, s.gamma_fast / p.j0, s.mu,
                   std::string(to_string(s.phase)), g ? std::string(to_string(g->label)) : std::string{}});
  }
  out.notes["omega_ceiling_over_j0"] = omega_ceiling(p.tau1) / p.j0;
  return out;
}

inline Output run_static_sweep(const RunConfig& cfg) {
  const Params& p = cfg.params;
  Output out;
  out.table.header = {"gamma0_over_j0", "gamma_slow", "gamma_fast", "phase"};
  for (std::size_t i = 0; i < p.points; ++i) {
    const double g = p.gamma_min + (p.gamma_max - p.gamma_min) * static_cast<double>(i) /
                                       static_cast<double>(p.points - 1);
    const auto s = static_spectrum({g, p.j0});
    out.table.add({g / p.j0, s.gamma0_slow / p.j0, s.gamma0_fast / p.j0, std::string(to_string(s.phase))});
  }
  return out;
}

inline Output run_evolve(const RunConfig& cfg) {
  const Params& p = cfg.params;
  const SystemParams sys{p.j0};
  const auto drive = DriveProtocol::from_omega(p.gamma0, p.tau1, p.omega);
  const auto traj = propagate(sys, drive, p.initial == "up" ? StateVec::spin_up() : StateVec::spin_down(),
                              p.periods, p.samples);
  Output out;
  out.table.header = {"t", "up_re", "up_im", "down_re", "down_im", "norm"};
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& s = traj.states[i];
    out.table.add({traj.times[i] * p.j0, s.up.real(), s.up.imag(), s.down.real(), s.down.imag(), traj.norms[i]});
  }
  const auto spec = floquet_spectrum(sys, drive);
  out.notes["phase"] = std::string(to_string(spec.phase));
  out.notes["gamma_slow_over_j0"] = spec.gamma_slow / p.j0;
  try {
    const auto fit = fit_lifetime(traj, p.discard);
    out.notes["gamma_fit_over_j0"] = fit.gamma_fit / p.j0;
    out.notes["fit_residual"] = fit.residual;
    out.notes["fit_samples"] = fit.samples;
  } catch (const FitError& e) {
    out.notes["fit_error"] = e.what();
  }
  return out;
}

inline Output run_classify(const RunConfig& cfg) {
  const Params& p = cfg.params;
  const auto sweep = omega_sweep({p.j0}, p.gamma0, p.tau1, {p.omega_min, p.omega_max}, sweep_points(p));
  const auto seg = classify_zeno(sweep, locate_features(sweep));
  Output out;
  out.table.header = {"record",   "kind",       "omega_lo_over_j0", "omega_hi_over_j0",
                      "phase",    "zeno_label", "resonance_order",  "note"};
  for (const auto& f : seg.features) {
    const double w = f.omega / p.j0;
    std::string note;
    if (f.kind == FeatureKind::RP && f.resonance_order >= 1)
      note = "offset from 2/n: " + report::format_double(f.resonance_offset / p.j0);
    out.table.add({std::string("feature"), std::string(to_string(f.kind)), w, w, std::string{}, std::string{},
                   static_cast<long long>(f.resonance_order), note});
  }
  for (const auto& b : seg.blocks)
    if (b.partial)
      out.table.add({std::string("block"), std::string("partial"), b.grid_lo / p.j0, b.grid_hi / p.j0,
                     std::string("PTB"), std::string{}, 0LL,
                     std::string("block touches the sweep edge; missing features are not extrapolated")});
  for (const auto& s : seg.segments) {
    std::string note;
    for (const auto& w : s.warnings) note += (note.empty() ? "" : "; ") + no_commas(w);
    out.table.add({std::string("segment"), std::string{}, s.omega_lo / p.j0, s.omega_hi / p.j0,
                   std::string(to_string(s.phase)), std::string(to_string(s.label)), 0LL, note});
  }
  return out;
}

inline int run_verify(std::ostream& out) {
  bool all = true;
  for (const auto& r : acceptance::run_all()) {
    char head[96];
    std::snprintf(head, sizeof head, "[%s] %d %-48s %7.2fs  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                  r.seconds);
    out << head << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all criteria passed" : "some criteria failed") << '\n';
  return all ? 0 : 1;
}

}  // namespace detail

/// Executes a parsed configuration. Returns 0 on success, 1 on failed verification,
/// 3 on I/O failure.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  if (cfg.command == Command::Verify) return detail::run_verify(out);

  detail::Output result;
  switch (cfg.command) {
    case Command::PhaseDiagram: result = detail::run_phase_diagram(cfg); break;
    case Command::OmegaSweep: result = detail::run_omega_sweep(cfg); break;
    case Command::StaticSweep: result = detail::run_static_sweep(cfg); break;
    case Command::Evolve: result = detail::run_evolve(cfg); break;
    case Command::Classify: result = detail::run_classify(cfg); break;
    case Command::Verify: break;
  }

  std::ostringstream body;
  if (cfg.format == Format::Json)
    report::write_json(body, result.table);
  else
    report::write_csv(body, result.table);

  if (cfg.output_path.empty()) {
    out << body.str();
    return 0;
  }

  nlohmann::ordered_json meta;
  meta["command"] = std::string(to_string(cfg.command));
  meta["format"] = cfg.format == Format::Json ? "json" : "csv";
  meta["params"] = detail::params_json(cfg);
  meta["columns"] = result.table.header;
  meta["rows"] = result.table.rows.size();
  meta["units"] = "rates and frequencies divided by j0, times multiplied by j0";
  if (!result.notes.empty()) meta["notes"] = result.notes;
  try {
    report::atomic_write(cfg.output_path, body.str());
    report::atomic_write(cfg.output_path + ".meta.json", meta.dump(2) + "\n");
  } catch (const report::IoError& e) {
    err << "ptzeno: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

/// Full program: parse, run, map errors onto exit codes.
inline int main(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_config(argv);
  } catch (const UsageError& e) {
    (e.exit_code == 0 ? out : err) << (e.exit_code == 0 ? "" : "ptzeno: ") << e.what() << '\n';
    return e.exit_code;
  }
  try {
    return run(cfg, out, err);
  } catch (const std::invalid_argument& e) {
    err << "ptzeno: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ptzeno::cli
