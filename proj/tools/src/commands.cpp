#include "fracar/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "fracar/errors.hpp"
#include "fracar/snapshot_io.hpp"
#include "fracar/validation.hpp"

namespace fracar::cli {

namespace fs = std::filesystem;

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <class T, class Eq = std::equal_to<T>>
void apply(const std::optional<T>& flag, const char* flag_name, const std::string& key,
           const std::set<std::string>& keys, T& target, Eq eq = {}) {
  if (!flag) return;
  if (keys.contains(key) && !eq(*flag, target)) {
    throw UsageError(std::string("--") + flag_name + " conflicts with " + key +
                     " in the configuration file");
  }
  target = *flag;
}

BoundaryMode parse_boundary_flag(const std::string& text) {
  if (text == "periodic") return BoundaryMode::periodic;
  if (text == "dirichlet") return BoundaryMode::dirichlet;
  throw UsageError("--boundary must be periodic or dirichlet");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

// Run the callable, mapping library errors onto exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SolverAbort& e) {
    err << "solver abort at step " << e.step() << ", cell " << e.cell() << ": " << e.what()
        << '\n';
    return kSolverAbort;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

void add_setup_flags(CLI::App& cmd, Overrides& flags, std::string& config, std::string& out_dir,
                     bool with_alpha) {
  cmd.add_option("--config", config, "INI configuration file");
  cmd.add_option("--scenario", flags.scenario, "freeway or congestion");
  if (with_alpha) cmd.add_option("--alpha", flags.alpha, "fractional order in (0, 1]");
  cmd.add_option("--delta", flags.delta, "motorcycle proportion in (0, 1)");
  cmd.add_option("--dt", flags.dt, "time step [s]");
  cmd.add_option("--dx", flags.dx, "road step [m]");
  cmd.add_option("--t-end", flags.t_end, "simulated time [s]");
  cmd.add_option("--boundary", flags.boundary, "periodic or dirichlet");
  cmd.add_option("--out-dir", out_dir, "output directory (default $FRACAR_OUT_DIR)");
}

}  // namespace

Setup resolve_setup(const std::string& config_path, const Overrides& flags) {
  ConfigDocument doc;
  if (!config_path.empty()) doc = parse_config(read_config_file(config_path));
  Setup& s = doc.setup;
  const auto& keys = doc.keys;

  if (flags.scenario) {
    const ScenarioKind kind = parse_scenario_kind(*flags.scenario);
    if (kind == ScenarioKind::custom) {
      throw UsageError("--scenario custom needs a profile; use a configuration file");
    }
    apply(std::optional{kind}, "scenario", "scenario.name", keys, s.scenario.kind);
  }
  apply(flags.alpha, "alpha", "simulation.alpha", keys, s.sim.alpha);
  apply(flags.delta, "delta", "road.class_proportion", keys, s.road.delta);
  apply(flags.dt, "dt", "simulation.time_step", keys, s.sim.dt);
  apply(flags.dx, "dx", "simulation.road_step", keys, s.sim.dx);
  apply(flags.t_end, "t-end", "simulation.simulation_time", keys, s.sim.t_end);
  if (flags.boundary) {
    apply(std::optional{parse_boundary_flag(*flags.boundary)}, "boundary", "simulation.boundary",
          keys, s.sim.boundary);
  }
  if (flags.t_end && !keys.contains("simulation.output_times")) {
    s.sim.output_times = default_output_times(s.sim.t_end);
  }
  s.validate();
  return s;
}

fs::path default_out_dir() {
  const char* env = std::getenv("FRACAR_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path("fracar_out");
}

RunResult execute_run(const Setup& setup, const fs::path& dir, bool gnuplot) {
  fs::create_directories(dir);
  RunResult result = run_setup(setup);
  for (const Snapshot& snap : result.snapshots) {
    write_snapshot_csv(snap, setup.sim.alpha, setup.road.delta,
                       dir / snapshot_file_name(snap.time));
  }
  write_metadata(setup, result, dir / "metadata.ini");
  if (gnuplot) write_gnuplot_script(result, dir);
  return result;
}

double density_spread(const Snapshot& snapshot) {
  if (snapshot.size() == 0) return 0.0;
  double lo = snapshot.rho_m[0] + snapshot.rho_c[0];
  double hi = lo;
  for (std::size_t i = 1; i < snapshot.size(); ++i) {
    const double rho = snapshot.rho_m[i] + snapshot.rho_c[i];
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  }
  return hi - lo;
}

std::vector<ComparisonRow> comparison_rows(double alpha, const RunResult& result, double dx) {
  std::vector<ComparisonRow> rows;
  for (const Snapshot& snap : result.snapshots) {
    ComparisonRow row{alpha, snap.time, density_spread(snap), 0.0, 0.0};
    for (std::size_t i = 0; i < snap.size(); ++i) {
      row.mass_m += snap.rho_m[i] * dx;
      row.mass_c += snap.rho_c[i] * dx;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  out << "alpha,t,spread,mass_m,mass_c\n";
  char buf[160];
  for (const ComparisonRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.12g,%.12g\n", r.alpha, r.time, r.spread,
                  r.mass_m, r.mass_c);
    out << buf;
  }
  return out.str();
}

std::string alpha_directory(double alpha) { return "alpha_" + shortest(alpha); }

std::vector<ComparisonRow> execute_sweep(const Setup& base, const std::vector<double>& alphas,
                                         const fs::path& dir, bool gnuplot) {
  if (alphas.empty()) throw UsageError("sweep needs at least one alpha");
  std::vector<Setup> setups;
  for (double a : alphas) {
    Setup s = base;
    s.sim.alpha = a;
    s.validate();
    setups.push_back(std::move(s));
  }
  fs::create_directories(dir);

  // Each member owns its Setup copy and output directory.
  std::vector<std::future<RunResult>> jobs;
  for (const Setup& s : setups) {
    jobs.push_back(std::async(std::launch::async, [&s, &dir, gnuplot] {
      return execute_run(s, dir / alpha_directory(s.sim.alpha), gnuplot);
    }));
  }
  std::vector<ComparisonRow> rows;
  std::exception_ptr failure;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      const RunResult result = jobs[i].get();
      const auto part = comparison_rows(alphas[i], result, base.sim.dx);
      rows.insert(rows.end(), part.begin(), part.end());
    } catch (...) {
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  write_text(dir / "comparison.csv", comparison_csv(rows));
  return rows;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-fractional two-class Aw-Rascle traffic solver", "fracar"};
  app.require_subcommand(1);

  Overrides run_flags;
  std::string run_config, run_out;
  bool run_plot = false;
  auto* run_cmd = app.add_subcommand("run", "Run one simulation and write CSV snapshots");
  add_setup_flags(*run_cmd, run_flags, run_config, run_out, true);
  run_cmd->add_flag("--gnuplot", run_plot, "also write plot.gp");

  Overrides sweep_flags;
  std::string sweep_config, sweep_out;
  std::vector<double> alphas;
  bool sweep_plot = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run several fractional orders concurrently");
  add_setup_flags(*sweep_cmd, sweep_flags, sweep_config, sweep_out, false);
  sweep_cmd->add_option("--alphas", alphas, "orders to compare (default 1,0.9,0.8,0.7)")
      ->delimiter(',');
  sweep_cmd->add_flag("--gnuplot", sweep_plot, "also write plot.gp per order");

  double conv_alpha = 0.9, conv_dx = 20.0, conv_dt = 0.2, conv_t_end = 10.0;
  int conv_levels = 3;
  unsigned conv_factor = 16;
  auto* conv_cmd =
      app.add_subcommand("converge", "Self-convergence study on a smooth ring profile");
  conv_cmd->add_option("--alpha", conv_alpha, "fractional order")->capture_default_str();
  conv_cmd->add_option("--dx", conv_dx, "coarsest road step [m]")->capture_default_str();
  conv_cmd->add_option("--dt", conv_dt, "coarsest time step [s]")->capture_default_str();
  conv_cmd->add_option("--t-end", conv_t_end, "simulated time [s]")->capture_default_str();
  conv_cmd->add_option("--levels", conv_levels, "number of halvings")->capture_default_str();
  conv_cmd->add_option("--reference-factor", conv_factor, "refinement of the reference run")
      ->capture_default_str();

  std::vector<std::string> suites;
  auto* validate_cmd = app.add_subcommand("validate", "Run the property and oracle suites");
  validate_cmd->add_option("--suite", suites, "suite to run (repeatable)")
      ->check(CLI::IsMember(validation::suite_names()));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kUsage;
  }

  if (*run_cmd) {
    return guarded(err, [&] {
      const Setup setup = resolve_setup(run_config, run_flags);
      const fs::path dir = run_out.empty() ? default_out_dir() : fs::path(run_out);
      const RunResult r = execute_run(setup, dir, run_plot);
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "%zu snapshots, %zu steps, %.3f s, max courant %.3f -> %s\n",
                    r.snapshots.size(), r.steps, r.wall_seconds,
                    r.worst_stability.courant_like_number, dir.string().c_str());
      out << buf;
      return static_cast<int>(kOk);
    });
  }

  if (*sweep_cmd) {
    return guarded(err, [&] {
      std::set<std::string> keys;
      if (!sweep_config.empty()) keys = parse_config(read_config_file(sweep_config)).keys;
      std::vector<double> list = alphas;
      const Setup setup = resolve_setup(sweep_config, sweep_flags);
      if (keys.contains("simulation.alpha")) {
        if (!list.empty()) {
          throw UsageError("--alphas conflicts with simulation.alpha in the configuration file");
        }
        list = {setup.sim.alpha};
      }
      if (list.empty()) list = {1.0, 0.9, 0.8, 0.7};
      const fs::path dir = sweep_out.empty() ? default_out_dir() : fs::path(sweep_out);
      out << comparison_csv(execute_sweep(setup, list, dir, sweep_plot));
      return static_cast<int>(kOk);
    });
  }

  if (*conv_cmd) {
    return guarded(err, [&] {
      const auto study = validation::scheme_convergence(conv_alpha, conv_dx, conv_dt, conv_t_end,
                                                        conv_levels, conv_factor);
      out << "dx,error,order\n";
      char buf[120];
      for (std::size_t i = 0; i < study.dx.size(); ++i) {
        if (i == 0) {
          std::snprintf(buf, sizeof(buf), "%.9g,%.9g,\n", study.dx[i], study.errors[i]);
        } else {
          std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.4f\n", study.dx[i], study.errors[i],
                        study.orders[i - 1]);
        }
        out << buf;
      }
      return static_cast<int>(kOk);
    });
  }

  return guarded(err, [&] {
    std::vector<oracle::OracleReport> reports;
    if (suites.empty()) {
      reports = validation::run_all();
    } else {
      for (const std::string& name : suites) {
        const auto part = validation::run_suite(name);
        reports.insert(reports.end(), part.begin(), part.end());
      }
    }
    out << oracle::reports_csv(reports);
    const bool ok = std::all_of(reports.begin(), reports.end(),
                                [](const oracle::OracleReport& r) { return r.pass; });
    return static_cast<int>(ok ? kOk : kValidationFailure);
  });
}

}  // namespace fracar::cli
