#pragma once

// Explicit fractional update
//
//   U_i^{k+1} = U_i^k - sum_{j<k} w_{k,j} (U_i^{j+1} - U_i^j)
//               - r [F_{i+1/2} - F_{i-1/2}] + dt^alpha Gamma(2-alpha) S(U_i^k),
//
// with r = dt^alpha Gamma(2-alpha) / dx, F the Roe interface flux and S the
// relaxation source evaluated explicitly at level k.

#include <cstddef>
#include <functional>
#include <vector>

#include "fracar/caputo.hpp"
#include "fracar/model.hpp"
#include "fracar/roe_flux.hpp"
#include "fracar/snapshot.hpp"

namespace fracar {

enum class BoundaryMode { periodic, dirichlet };

struct SimConfig {
  double alpha = 1.0;
  double dt = 0.05;     // s
  double dx = 5.0;      // m
  double t_end = 60.0;  // s
  BoundaryMode boundary = BoundaryMode::periodic;
  double eps_fix = kDefaultEntropyFix;
  double density_floor = kDefaultDensityFloor;
  std::vector<double> output_times{0.0, 1.0, 20.0, 40.0, 60.0};

  // Throws DomainError (alpha, dt, dx, t_end, output_times out of range).
  void validate() const;
  // round(t_end / dt)
  std::size_t step_count() const;
  // Nearest completed step for an output time.
  std::size_t step_for_time(double t) const;
};

// g1 gives the initial state at x, g2/g3 the pinned endpoint states at time t
// (only consulted in dirichlet mode).
struct BoundaryData {
  std::function<Cell(double)> initial;
  std::function<Cell(double)> left;
  std::function<Cell(double)> right;
};

// dt^alpha Gamma(2 - alpha)
double time_factor(const SimConfig& config);
// dt^alpha Gamma(2 - alpha) / dx
double scheme_ratio(const SimConfig& config);

struct StabilityDiagnostic {
  double max_wave_speed = 0.0;       // max entropy-fixed |lambda| over cells and classes
  double courant_like_number = 0.0;  // scheme_ratio * max_wave_speed
  bool ok = true;                    // courant_like_number <= 1
};

StabilityDiagnostic stability_guard(const GridState& state, const SimConfig& config,
                                    const Closures& closures);

// periodic: nothing to overwrite, neighbours wrap inside the update.
// dirichlet: cells 0 and N-1 are set to g2(t), g3(t).
void apply_boundary(GridState& state, BoundaryMode mode, const BoundaryData& boundary, double t);

struct StepStats {
  std::size_t clamp_events = 0;
};

// Advances the grid and history by one step. Buffers are reused across calls.
class Stepper {
 public:
  Stepper(SimConfig config, Closures closures, BoundaryData boundary, GridState initial);

  // Throws SolverAbort on a non-finite value.
  void step();

  const GridState& state() const { return state_; }
  const HistoryBuffer& history() const { return history_; }
  const SimConfig& config() const { return config_; }
  const Closures& closures() const { return closures_; }
  double time() const { return static_cast<double>(state_.time_level) * config_.dt; }
  std::size_t clamp_events() const { return stats_.clamp_events; }

 private:
  SimConfig config_;
  Closures closures_;
  BoundaryData boundary_;
  GridState state_;
  HistoryBuffer history_;
  StepStats stats_;
  GridState next_;
  std::vector<Vec4> memory_;
  std::vector<Vec4> fluxes_;
  std::vector<Vec4> increment_;
  std::vector<double> weights_;
};

// One step without a persistent Stepper; appends the new increment to history.
GridState step(const GridState& state, HistoryBuffer& history, const SimConfig& config,
               const Closures& closures, const BoundaryData& boundary,
               StepStats* stats = nullptr);

struct RunResult {
  std::vector<Snapshot> snapshots;
  GridState final_state;
  std::size_t steps = 0;
  std::size_t clamp_events = 0;
  StabilityDiagnostic initial_stability;
  StabilityDiagnostic worst_stability;
  std::size_t unstable_steps = 0;  // steps whose diagnostic was not ok
  double wall_seconds = 0.0;
};

using StepObserver = std::function<void(const GridState&)>;

// Iterates step() from the initial grid to t_end and records snapshots at the
// configured output times. The observer, if set, sees every level including 0.
RunResult run(const SimConfig& config, const GridState& initial, const BoundaryData& boundary,
              const Closures& closures, const StepObserver& observer = {});

}  // namespace fracar
