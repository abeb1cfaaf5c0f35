#pragma once

// Built-in ring-road scenarios, class splitting and the configuration document.
//
// Configuration is an INI document:
//
//   [simulation]  alpha, time_step, road_step, simulation_time, boundary,
//                 entropy_fix, density_floor, output_times
//   [road]        length, width, class_proportion
//   [motorcycle]  max_speed, max_area_occupancy, pressure_exponent,
//   [car]         relaxation_time, length, width
//   [scenario]    name, velocity, segments, mean, amplitude, wavelength,
//                 motorcycle_velocity, car_velocity
//   [provenance]  free-form; written into run metadata and ignored on load
//
// Every key is optional; missing keys take the calibration defaults. Unknown
// keys are rejected.

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fracar/model.hpp"
#include "fracar/stepper.hpp"

namespace fracar {

enum class ScenarioKind { freeway, congestion, custom };
enum class VelocityRule { equilibrium, explicit_profiles };

// Piecewise-constant profile: `value` applies on [start, next start).
struct ProfileSegment {
  double start = 0.0;
  double value = 0.0;

  friend bool operator==(const ProfileSegment&, const ProfileSegment&) = default;
};

// mean + amplitude * sin(2 pi x / wavelength)
struct SineProfile {
  double mean = 0.3;
  double amplitude = 0.1;
  double wavelength = 500.0;

  friend bool operator==(const SineProfile&, const SineProfile&) = default;
};

using CustomProfile = std::variant<std::vector<ProfileSegment>, SineProfile>;

struct Scenario {
  ScenarioKind kind = ScenarioKind::freeway;
  CustomProfile custom_profile = std::vector<ProfileSegment>{};
  VelocityRule velocity_rule = VelocityRule::equilibrium;
  std::vector<ProfileSegment> moto_velocity;  // explicit_profiles only
  std::vector<ProfileSegment> car_velocity;

  double total_density(double x) const;
};

// 0.1 for x < 100, 0.2 for x >= 100.
double freeway_profile(double x);
// 0.8 on (150, 180), 0.1 elsewhere. The band (130, 150] has no prescribed
// value and is filled with the neighbouring 0.1 plateau.
double congestion_profile(double x);

double evaluate_segments(const std::vector<ProfileSegment>& segments, double x);

struct ClassDensities {
  double moto = 0.0;
  double car = 0.0;
};

// rho_m = delta rho_0, rho_c = rho_0 - rho_m.
ClassDensities split_by_class(double rho_total, double delta);

ScenarioKind parse_scenario_kind(std::string_view name);  // case-insensitive
std::string to_string(ScenarioKind kind);
std::string to_string(BoundaryMode mode);
std::string to_string(VelocityRule rule);

// Complete description of one run.
struct Setup {
  SimConfig sim;
  Scenario scenario;
  RoadParams road;
  VehicleClassParams moto = VehicleClassParams::motorcycle_defaults();
  VehicleClassParams car = VehicleClassParams::car_defaults();

  Closures closures() const;
  // round(road.length / dx); ConfigError if dx does not divide the road.
  std::size_t cell_count() const;
  void validate() const;
};

struct InitialData {
  GridState grid;
  BoundaryData boundary;
};

// Samples the profile at x_i = i dx, splits by delta, initializes each class at
// its equilibrium speed for the local occupancy (or the explicit profiles) and
// converts to conserved variables. Dirichlet endpoints hold their initial states.
InitialData initial_grid(const Scenario& scenario, const RoadParams& road,
                         const Closures& closures, const SimConfig& config);
InitialData initial_grid(const Setup& setup);

// {0, 1, 20, 40, 60} clipped to t_end; {0} if nothing remains.
std::vector<double> default_output_times(double t_end);

struct ConfigDocument {
  Setup setup;
  std::set<std::string> keys;  // "section.key" for every key present in the text
};

// Throws ConfigError with the offending key path.
ConfigDocument parse_config(std::string_view text);
Setup load_config(std::string_view text);
std::string read_config_file(const std::string& path);
Setup load_config_file(const std::string& path);

// Inverse of load_config: every effective parameter, defaults included.
std::string to_config_text(const Setup& setup);

RunResult run_setup(const Setup& setup, const StepObserver& observer = {});

}  // namespace fracar
