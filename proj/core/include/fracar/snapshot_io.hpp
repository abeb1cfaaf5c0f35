#pragma once

// CSV snapshot files and run metadata.
//
// Snapshot layout:
//   # t=<seconds> alpha=<alpha> delta=<delta>
//   x,rho_m,v_m,rho_c,v_c
//   <one row per cell, 9 significant digits>

#include <filesystem>
#include <string>

#include "fracar/scenario.hpp"
#include "fracar/snapshot.hpp"

namespace fracar {

struct SnapshotFile {
  Snapshot snapshot;
  double alpha = 0.0;
  double delta = 0.0;
};

// Throws std::runtime_error when the path cannot be written.
void write_snapshot_csv(const Snapshot& snapshot, double alpha, double delta,
                        const std::filesystem::path& path);
std::string snapshot_csv(const Snapshot& snapshot, double alpha, double delta);

SnapshotFile read_snapshot_csv(const std::filesystem::path& path);

// "snapshot_t0060.00.csv"
std::string snapshot_file_name(double time);

// The effective configuration followed by a [provenance] section, so the file
// loads back through load_config and reproduces the run.
std::string metadata_text(const Setup& setup, const RunResult& result);
void write_metadata(const Setup& setup, const RunResult& result,
                    const std::filesystem::path& path);

// gnuplot script plotting every snapshot in `dir` (densities and speeds).
void write_gnuplot_script(const RunResult& result, const std::filesystem::path& dir);

}  // namespace fracar
