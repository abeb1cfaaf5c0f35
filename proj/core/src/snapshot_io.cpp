#include "fracar/snapshot_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracar {

namespace {

std::string sig9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

std::string snapshot_csv(const Snapshot& s, double alpha, double delta) {
  std::ostringstream out;
  out << "# t=" << sig9(s.time) << " alpha=" << sig9(alpha) << " delta=" << sig9(delta) << "\n";
  out << "x,rho_m,v_m,rho_c,v_c\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << sig9(s.x[i]) << ',' << sig9(s.rho_m[i]) << ',' << sig9(s.v_m[i]) << ','
        << sig9(s.rho_c[i]) << ',' << sig9(s.v_c[i]) << '\n';
  }
  return out.str();
}

void write_snapshot_csv(const Snapshot& snapshot, double alpha, double delta,
                        const std::filesystem::path& path) {
  write_file(path, snapshot_csv(snapshot, alpha, delta));
}

SnapshotFile read_snapshot_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  SnapshotFile file;
  std::string line;
  if (!std::getline(in, line) ||
      std::sscanf(line.c_str(), "# t=%lf alpha=%lf delta=%lf", &file.snapshot.time, &file.alpha,
                  &file.delta) != 3) {
    throw std::runtime_error(path.string() + ": missing '# t=... alpha=... delta=...' line");
  }
  if (!std::getline(in, line) || line != "x,rho_m,v_m,rho_c,v_c") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  Snapshot& s = file.snapshot;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, rm, vm, rc, vc;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &rm, &vm, &rc, &vc) != 5) {
      throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    }
    s.x.push_back(x);
    s.rho_m.push_back(rm);
    s.v_m.push_back(vm);
    s.rho_c.push_back(rc);
    s.v_c.push_back(vc);
  }
  return file;
}

std::string snapshot_file_name(double time) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snapshot_t%07.2f.csv", time);
  return buf;
}

std::string metadata_text(const Setup& setup, const RunResult& result) {
  std::ostringstream out;
  out << to_config_text(setup);
  out << "\n[provenance]\n";
  out << "cells = " << setup.cell_count() << "\n";
  out << "steps = " << result.steps << "\n";
  out << "scheme_ratio = " << sig9(scheme_ratio(setup.sim)) << "\n";
  out << "initial_velocity_rule = "
      << (setup.scenario.velocity_rule == VelocityRule::equilibrium
              ? "class equilibrium speed at local area occupancy"
              : "explicit profiles")
      << "\n";
  if (setup.scenario.kind == ScenarioKind::congestion) {
    out << "congestion_gap_fill = density 0.1 on 130 < x <= 150 (no prescribed value)\n";
  }
  out << "area_occupancy_closure = psi * rho\n";
  out << "roe_average = arithmetic mean of conserved variables\n";
  out << "entropy_fix = harten\n";
  out << "initial_courant_like_number = " << sig9(result.initial_stability.courant_like_number)
      << "\n";
  out << "worst_courant_like_number = " << sig9(result.worst_stability.courant_like_number)
      << "\n";
  out << "unstable_steps = " << result.unstable_steps << "\n";
  out << "clamp_events = " << result.clamp_events << "\n";
  out << "wall_seconds = " << sig9(result.wall_seconds) << "\n";
  return out.str();
}

void write_metadata(const Setup& setup, const RunResult& result,
                    const std::filesystem::path& path) {
  write_file(path, metadata_text(setup, result));
}

void write_gnuplot_script(const RunResult& result, const std::filesystem::path& dir) {
  std::ostringstream out;
  out << "set datafile separator ','\nset key outside\nset xlabel 'x (m)'\n";
  out << "set terminal pngcairo size 1200,900\nset output 'snapshots.png'\n";
  out << "set multiplot layout 2,2\n";
  const char* columns[] = {"rho_m", "v_m", "rho_c", "v_c"};
  for (int col = 0; col < 4; ++col) {
    out << "set title '" << columns[col] << "'\nplot ";
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
      if (i) out << ", ";
      out << "'" << snapshot_file_name(result.snapshots[i].time) << "' skip 2 using 1:" << col + 2
          << " with lines title 't=" << sig9(result.snapshots[i].time) << "s'";
    }
    out << "\n";
  }
  out << "unset multiplot\n";
  write_file(dir / "plot.gp", out.str());
}

}  // namespace fracar
