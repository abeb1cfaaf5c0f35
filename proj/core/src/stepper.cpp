#include "fracar/stepper.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <string>

#include "fracar/errors.hpp"

namespace fracar {

void SimConfig::validate() const {
  validate_alpha(alpha);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw DomainError("dx must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be >= 0");
  if (!(eps_fix > 0.0)) throw DomainError("eps_fix must be positive");
  if (!(density_floor > 0.0)) throw DomainError("density_floor must be positive");
  for (double t : output_times) {
    if (!(t >= 0.0 && t <= t_end + 1e-9 * std::max(1.0, t_end))) {
      throw DomainError("output time " + std::to_string(t) + " outside [0, t_end]");
    }
  }
}

std::size_t SimConfig::step_count() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::size_t SimConfig::step_for_time(double t) const {
  return std::min(step_count(), static_cast<std::size_t>(std::llround(t / dt)));
}

double time_factor(const SimConfig& config) {
  return std::pow(config.dt, config.alpha) * std::tgamma(2.0 - config.alpha);
}

double scheme_ratio(const SimConfig& config) { return time_factor(config) / config.dx; }

StabilityDiagnostic stability_guard(const GridState& state, const SimConfig& config,
                                    const Closures& closures) {
  double max_speed = 0.0;
  for (const Cell& c : state.cells) {
    for (const auto& [s, cl] : {std::pair{c.moto, closures.moto}, std::pair{c.car, closures.car}}) {
      if (s.rho < closures.density_floor) continue;
      const EigenPair e =
          eigenstructure(s.rho, s.x_momentum, cl.psi, cl.params.gamma, closures.density_floor);
      max_speed = std::max({max_speed, entropy_fixed_abs(e.lambda1, config.eps_fix),
                            entropy_fixed_abs(e.lambda2, config.eps_fix)});
    }
  }
  StabilityDiagnostic d;
  d.max_wave_speed = max_speed;
  d.courant_like_number = scheme_ratio(config) * max_speed;
  d.ok = d.courant_like_number <= 1.0;
  return d;
}

void apply_boundary(GridState& state, BoundaryMode mode, const BoundaryData& boundary, double t) {
  if (mode == BoundaryMode::periodic) return;
  if (!boundary.left || !boundary.right) {
    throw DomainError("dirichlet boundary requires left and right boundary functions");
  }
  state.cells.front() = boundary.left(t);
  state.cells.back() = boundary.right(t);
}

namespace {

struct Workspace {
  std::vector<Vec4> memory;
  std::vector<Vec4> fluxes;
  std::vector<Vec4> increment;
  std::vector<double> weights;
};

bool clamp_density(ClassState& s, const ClassClosure& closure, double floor) {
  if (s.rho >= floor) return false;
  s = {floor, floor * closure.pressure(floor)};
  return true;
}

// Writes level k+1 into `next` and appends U^{k+1} - U^k to history.
void advance(const GridState& state, GridState& next, HistoryBuffer& history,
             const SimConfig& config, const Closures& closures, const BoundaryData& boundary,
             Workspace& ws, StepStats& stats) {
  const std::size_t n = state.size();
  if (history.cell_count() != n || history.step_count() != state.time_level) {
    throw InvariantViolation("history holds " + std::to_string(history.step_count()) +
                             " steps of " + std::to_string(history.cell_count()) +
                             " cells; grid is at level " + std::to_string(state.time_level) +
                             " with " + std::to_string(n) + " cells");
  }
  const bool periodic = config.boundary == BoundaryMode::periodic;
  const double factor = time_factor(config);
  const double ratio = factor / config.dx;

  ws.memory.resize(n);
  memory_term(history, config.alpha, ws.memory, ws.weights);

  // fluxes[i] is the flux through the interface between cells i and i+1.
  const std::size_t interfaces = periodic ? n : n - 1;
  ws.fluxes.resize(interfaces);
  for (std::size_t i = 0; i < interfaces; ++i) {
    ws.fluxes[i] =
        numerical_flux(state.cells[i], state.cells[(i + 1) % n], closures, config.eps_fix);
  }

  next.dx = state.dx;
  next.time_level = state.time_level + 1;
  next.cells.resize(n);
  const std::size_t first = periodic ? 0 : 1;
  const std::size_t last = periodic ? n : n - 1;
  for (std::size_t i = first; i < last; ++i) {
    const Vec4 u = state.cells[i].to_vec();
    const Vec4& f_right = ws.fluxes[i];
    const Vec4& f_left = ws.fluxes[(i + n - 1) % n];
    const Vec4 s = source_term(state.cells[i], closures);
    Vec4 out;
    for (std::size_t c = 0; c < 4; ++c) {
      out[c] = u[c] - ws.memory[i][c] - ratio * (f_right[c] - f_left[c]) + factor * s[c];
      if (!std::isfinite(out[c])) {
        throw SolverAbort("non-finite state at step " + std::to_string(next.time_level) +
                              ", cell " + std::to_string(i),
                          next.time_level, i);
      }
    }
    next.cells[i] = Cell::from_vec(out);
  }
  if (!periodic) {
    apply_boundary(next, BoundaryMode::dirichlet, boundary,
                   static_cast<double>(next.time_level) * config.dt);
  }

  for (Cell& c : next.cells) {
    stats.clamp_events += clamp_density(c.moto, closures.moto, closures.density_floor);
    stats.clamp_events += clamp_density(c.car, closures.car, closures.density_floor);
  }

  ws.increment.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ws.increment[i] = next.cells[i].to_vec() - state.cells[i].to_vec();
  }
  history.append(ws.increment);
}

}  // namespace

Stepper::Stepper(SimConfig config, Closures closures, BoundaryData boundary, GridState initial)
    : config_(std::move(config)),
      closures_(closures),
      boundary_(std::move(boundary)),
      state_(std::move(initial)),
      history_(state_.size()) {
  config_.validate();
  state_.validate();
  if (state_.time_level != 0) {
    throw InvariantViolation("Stepper must start from level 0");
  }
  history_.reserve_steps(config_.step_count());
}

void Stepper::step() {
  Workspace ws{std::move(memory_), std::move(fluxes_), std::move(increment_), std::move(weights_)};
  advance(state_, next_, history_, config_, closures_, boundary_, ws, stats_);
  std::swap(state_, next_);
  memory_ = std::move(ws.memory);
  fluxes_ = std::move(ws.fluxes);
  increment_ = std::move(ws.increment);
  weights_ = std::move(ws.weights);
}

GridState step(const GridState& state, HistoryBuffer& history, const SimConfig& config,
               const Closures& closures, const BoundaryData& boundary, StepStats* stats) {
  Workspace ws;
  StepStats local;
  GridState next;
  advance(state, next, history, config, closures, boundary, ws, stats ? *stats : local);
  return next;
}

Snapshot make_snapshot(const GridState& grid, double time, const Closures& closures) {
  Snapshot s;
  s.time = time;
  const std::size_t n = grid.size();
  s.x.reserve(n);
  s.rho_m.reserve(n);
  s.v_m.reserve(n);
  s.rho_c.reserve(n);
  s.v_c.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Cell& c = grid.cells[i];
    const Primitive m = conserved_to_primitive(c.moto, closures.moto.psi,
                                               closures.moto.params.gamma, closures.density_floor);
    const Primitive k = conserved_to_primitive(c.car, closures.car.psi,
                                               closures.car.params.gamma, closures.density_floor);
    s.x.push_back(grid.position(i));
    s.rho_m.push_back(m.rho);
    s.v_m.push_back(m.v);
    s.rho_c.push_back(k.rho);
    s.v_c.push_back(k.v);
  }
  return s;
}

RunResult run(const SimConfig& config, const GridState& initial, const BoundaryData& boundary,
              const Closures& closures, const StepObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  Stepper stepper(config, closures, boundary, initial);

  std::set<std::size_t> output_steps;
  for (double t : config.output_times) output_steps.insert(config.step_for_time(t));

  RunResult result;
  result.initial_stability = stability_guard(stepper.state(), config, closures);
  result.worst_stability = result.initial_stability;
  if (!result.initial_stability.ok) ++result.unstable_steps;

  auto record = [&] {
    const std::size_t k = stepper.state().time_level;
    if (observer) observer(stepper.state());
    if (output_steps.contains(k)) {
      result.snapshots.push_back(make_snapshot(stepper.state(), stepper.time(), closures));
    }
  };

  record();
  const std::size_t steps = config.step_count();
  for (std::size_t k = 0; k < steps; ++k) {
    stepper.step();
    const StabilityDiagnostic d = stability_guard(stepper.state(), config, closures);
    if (d.courant_like_number > result.worst_stability.courant_like_number) {
      result.worst_stability = d;
    }
    if (!d.ok) ++result.unstable_steps;
    record();
  }

  result.final_state = stepper.state();
  result.steps = steps;
  result.clamp_events = stepper.clamp_events();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace fracar
