#pragma once

// Command-line driver: run, sweep, converge and validate.
//
// Exit codes: 0 success, 2 usage error, 3 solver abort, 4 validation failure.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracar/scenario.hpp"
#include "fracar/snapshot.hpp"
#include "fracar/stepper.hpp"

namespace fracar::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kSolverAbort = 3, kValidationFailure = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag values; unset members leave the configuration alone.
struct Overrides {
  std::optional<std::string> scenario;
  std::optional<double> alpha;
  std::optional<double> delta;
  std::optional<double> dt;
  std::optional<double> dx;
  std::optional<double> t_end;
  std::optional<std::string> boundary;
};

// Loads `config_path` (empty: defaults) and applies the flags. A flag that
// contradicts a key written in the file is a UsageError; so is anything the
// configuration loader or Setup::validate rejects.
Setup resolve_setup(const std::string& config_path, const Overrides& flags);

// $FRACAR_OUT_DIR, or "fracar_out" when unset.
std::filesystem::path default_out_dir();

// Runs one simulation and writes its snapshots, metadata.ini and optionally
// plot.gp into `dir`. SolverAbort propagates.
RunResult execute_run(const Setup& setup, const std::filesystem::path& dir, bool gnuplot);

struct ComparisonRow {
  double alpha = 0.0;
  double time = 0.0;
  double spread = 0.0;  // max - min of rho_m + rho_c
  double mass_m = 0.0;  // sum rho_m dx
  double mass_c = 0.0;
};

double density_spread(const Snapshot& snapshot);
std::vector<ComparisonRow> comparison_rows(double alpha, const RunResult& result, double dx);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// "alpha_0.9"
std::string alpha_directory(double alpha);

// One run per alpha, concurrently, each in dir/alpha_<alpha>/, plus
// dir/comparison.csv. Rows are ordered as `alphas`.
std::vector<ComparisonRow> execute_sweep(const Setup& base, const std::vector<double>& alphas,
                                         const std::filesystem::path& dir, bool gnuplot);

// Parses `args` (without the program name) and dispatches.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracar::cli
