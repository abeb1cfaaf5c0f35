#include "fracar/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fracar/errors.hpp"

namespace fracar {

double freeway_profile(double x) { return x < 100.0 ? 0.1 : 0.2; }

double congestion_profile(double x) {
  if (x > 150.0 && x < 180.0) return 0.8;
  return 0.1;
}

double evaluate_segments(const std::vector<ProfileSegment>& segments, double x) {
  if (segments.empty()) throw ConfigError("scenario.segments: empty profile");
  double value = segments.front().value;
  for (const ProfileSegment& s : segments) {
    if (x >= s.start) value = s.value;
  }
  return value;
}

double Scenario::total_density(double x) const {
  switch (kind) {
    case ScenarioKind::freeway:
      return freeway_profile(x);
    case ScenarioKind::congestion:
      return congestion_profile(x);
    case ScenarioKind::custom:
      break;
  }
  if (const auto* sine = std::get_if<SineProfile>(&custom_profile)) {
    return sine->mean + sine->amplitude * std::sin(2.0 * std::numbers::pi * x / sine->wavelength);
  }
  return evaluate_segments(std::get<std::vector<ProfileSegment>>(custom_profile), x);
}

ClassDensities split_by_class(double rho_total, double delta) {
  const double moto = delta * rho_total;
  return {moto, rho_total - moto};
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, const std::string& key) {
  text = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(trim(text.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::vector<double> parse_number_list(std::string_view text, const std::string& key) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (std::string_view item : split(text, ',')) out.push_back(parse_number(item, key));
  return out;
}

std::vector<ProfileSegment> parse_segments(std::string_view text, const std::string& key) {
  std::vector<ProfileSegment> out;
  for (std::string_view item : split(text, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(key + ": segment '" + std::string(item) + "' is not start:value");
    }
    out.push_back({parse_number(item.substr(0, colon), key),
                   parse_number(item.substr(colon + 1), key)});
  }
  if (!std::is_sorted(out.begin(), out.end(),
                      [](const auto& a, const auto& b) { return a.start < b.start; })) {
    throw ConfigError(key + ": segment starts must be increasing");
  }
  return out;
}

std::string format_segments(const std::vector<ProfileSegment>& segments) {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += ", ";
    out += format_number(segments[i].start) + ":" + format_number(segments[i].value);
  }
  return out;
}

BoundaryMode parse_boundary(std::string_view text, const std::string& key) {
  const std::string s = lower(trim(text));
  if (s == "periodic") return BoundaryMode::periodic;
  if (s == "dirichlet") return BoundaryMode::dirichlet;
  throw ConfigError(key + ": expected periodic or dirichlet, got '" + std::string(text) + "'");
}

VelocityRule parse_velocity_rule(std::string_view text, const std::string& key) {
  const std::string s = lower(trim(text));
  if (s == "equilibrium") return VelocityRule::equilibrium;
  if (s == "explicit") return VelocityRule::explicit_profiles;
  throw ConfigError(key + ": expected equilibrium or explicit, got '" + std::string(text) + "'");
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"simulation",
       {"alpha", "time_step", "road_step", "simulation_time", "boundary", "entropy_fix",
        "density_floor", "output_times"}},
      {"road", {"length", "width", "class_proportion"}},
      {"motorcycle",
       {"max_speed", "max_area_occupancy", "pressure_exponent", "relaxation_time", "length",
        "width"}},
      {"car",
       {"max_speed", "max_area_occupancy", "pressure_exponent", "relaxation_time", "length",
        "width"}},
      {"scenario",
       {"name", "velocity", "segments", "mean", "amplitude", "wavelength", "motorcycle_velocity",
        "car_velocity"}},
  };
  return keys;
}

void load_class(const boost::property_tree::ptree& section, const std::string& name,
                VehicleClassParams& p) {
  const std::map<std::string, double*> fields{
      {"max_speed", &p.v_max},        {"max_area_occupancy", &p.ao_max},
      {"pressure_exponent", &p.gamma}, {"relaxation_time", &p.tau},
      {"length", &p.length},           {"width", &p.width},
  };
  for (const auto& [key, value] : section) {
    *fields.at(key) = parse_number(value.data(), name + "." + key);
  }
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  const std::string s = lower(trim(name));
  if (s == "freeway") return ScenarioKind::freeway;
  if (s == "congestion") return ScenarioKind::congestion;
  if (s == "custom") return ScenarioKind::custom;
  throw ConfigError("scenario.name: unknown scenario '" + std::string(name) + "'");
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::freeway:
      return "freeway";
    case ScenarioKind::congestion:
      return "congestion";
    case ScenarioKind::custom:
      return "custom";
  }
  return "?";
}

std::string to_string(BoundaryMode mode) {
  return mode == BoundaryMode::periodic ? "periodic" : "dirichlet";
}

std::string to_string(VelocityRule rule) {
  return rule == VelocityRule::equilibrium ? "equilibrium" : "explicit";
}

Closures Setup::closures() const { return Closures::make(road, moto, car, sim.density_floor); }

std::size_t Setup::cell_count() const {
  const double cells = road.length / sim.dx;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
    throw ConfigError("simulation.road_step: " + format_number(sim.dx) +
                      " does not divide road.length " + format_number(road.length));
  }
  return static_cast<std::size_t>(rounded);
}

void Setup::validate() const {
  try {
    sim.validate();
    road.validate();
    moto.validate();
    car.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (cell_count() < 3) throw ConfigError("road.length: fewer than 3 cells");
  if (scenario.velocity_rule == VelocityRule::explicit_profiles &&
      (scenario.moto_velocity.empty() || scenario.car_velocity.empty())) {
    throw ConfigError("scenario.velocity: explicit requires motorcycle_velocity and car_velocity");
  }
}

InitialData initial_grid(const Scenario& scenario, const RoadParams& road,
                         const Closures& closures, const SimConfig& config) {
  road.validate();
  const double cells = std::round(road.length / config.dx);
  if (cells < 3) throw ConfigError("road.length: fewer than 3 cells");
  const auto n = static_cast<std::size_t>(cells);

  auto state_at = [scenario, road, closures](double x) -> Cell {
    const double rho0 = scenario.total_density(x);
    if (!(rho0 >= 0.0 && rho0 <= 1.0)) {
      throw ConfigError("scenario: total density " + format_number(rho0) + " at x=" +
                        format_number(x) + " outside [0, 1]");
    }
    const ClassDensities d = split_by_class(rho0, road.delta);
    auto init = [&](double rho, const ClassClosure& cl,
                    const std::vector<ProfileSegment>& explicit_v) {
      const double v = scenario.velocity_rule == VelocityRule::equilibrium
                           ? equilibrium_velocity(area_occupancy(rho, cl.psi), cl.params)
                           : evaluate_segments(explicit_v, x);
      return primitive_to_conserved(rho, v, cl.psi, cl.params.gamma);
    };
    return {init(d.moto, closures.moto, scenario.moto_velocity),
            init(d.car, closures.car, scenario.car_velocity)};
  };

  InitialData data;
  data.grid.dx = config.dx;
  data.grid.cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.grid.cells.push_back(state_at(static_cast<double>(i) * config.dx));
  }
  const Cell left = data.grid.cells.front();
  const Cell right = data.grid.cells.back();
  data.boundary.initial = state_at;
  data.boundary.left = [left](double) { return left; };
  data.boundary.right = [right](double) { return right; };
  return data;
}

InitialData initial_grid(const Setup& setup) {
  setup.validate();
  return initial_grid(setup.scenario, setup.road, setup.closures(), setup.sim);
}

std::vector<double> default_output_times(double t_end) {
  std::vector<double> times = SimConfig{}.output_times;
  std::erase_if(times, [&](double t) { return t > t_end; });
  if (times.empty()) times.push_back(0.0);
  return times;
}

Setup load_config(std::string_view text) { return parse_config(text).setup; }

ConfigDocument parse_config(std::string_view text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("malformed configuration: " + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }

  ConfigDocument doc;
  const auto& known = known_keys();
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) {
      throw ConfigError(section + ": key outside of a section");
    }
    if (section == "provenance") continue;
    const auto it = known.find(section);
    if (it == known.end()) throw ConfigError(section + ": unknown section");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key + ": unknown key");
      doc.keys.insert(section + "." + key);
    }
  }

  Setup& setup = doc.setup;
  const pt::ptree empty;
  auto section = [&](const std::string& name) -> const pt::ptree& {
    const auto child = tree.get_child_optional(name);
    return child ? *child : empty;
  };

  for (const auto& [key, value] : section("simulation")) {
    const std::string path = "simulation." + key;
    const std::string& v = value.data();
    if (key == "alpha") setup.sim.alpha = parse_number(v, path);
    else if (key == "time_step") setup.sim.dt = parse_number(v, path);
    else if (key == "road_step") setup.sim.dx = parse_number(v, path);
    else if (key == "simulation_time") setup.sim.t_end = parse_number(v, path);
    else if (key == "boundary") setup.sim.boundary = parse_boundary(v, path);
    else if (key == "entropy_fix") setup.sim.eps_fix = parse_number(v, path);
    else if (key == "density_floor") setup.sim.density_floor = parse_number(v, path);
    else if (key == "output_times") setup.sim.output_times = parse_number_list(v, path);
  }
  // Default output schedule is clipped to a shorter horizon; an explicit one is not.
  if (!doc.keys.contains("simulation.output_times")) {
    setup.sim.output_times = default_output_times(setup.sim.t_end);
  }

  for (const auto& [key, value] : section("road")) {
    const std::string path = "road." + key;
    if (key == "length") setup.road.length = parse_number(value.data(), path);
    else if (key == "width") setup.road.width = parse_number(value.data(), path);
    else if (key == "class_proportion") setup.road.delta = parse_number(value.data(), path);
  }

  load_class(section("motorcycle"), "motorcycle", setup.moto);
  load_class(section("car"), "car", setup.car);

  const pt::ptree& sc = section("scenario");
  if (auto name = sc.get_optional<std::string>("name")) {
    setup.scenario.kind = parse_scenario_kind(*name);
  }
  if (auto rule = sc.get_optional<std::string>("velocity")) {
    setup.scenario.velocity_rule = parse_velocity_rule(*rule, "scenario.velocity");
  }
  if (auto v = sc.get_optional<std::string>("motorcycle_velocity")) {
    setup.scenario.moto_velocity = parse_segments(*v, "scenario.motorcycle_velocity");
  }
  if (auto v = sc.get_optional<std::string>("car_velocity")) {
    setup.scenario.car_velocity = parse_segments(*v, "scenario.car_velocity");
  }
  const bool has_segments = sc.get_child_optional("segments").has_value();
  const bool has_sine = sc.get_child_optional("mean") || sc.get_child_optional("amplitude") ||
                        sc.get_child_optional("wavelength");
  if ((has_segments || has_sine) && setup.scenario.kind != ScenarioKind::custom) {
    throw ConfigError("scenario.segments: profile keys require name = custom");
  }
  if (has_segments && has_sine) {
    throw ConfigError("scenario.segments: give either segments or mean/amplitude/wavelength");
  }
  if (has_segments) {
    setup.scenario.custom_profile = parse_segments(sc.get<std::string>("segments"),
                                                   "scenario.segments");
  } else if (has_sine) {
    SineProfile sine;
    sine.wavelength = setup.road.length;
    if (auto v = sc.get_optional<std::string>("mean")) sine.mean = parse_number(*v, "scenario.mean");
    if (auto v = sc.get_optional<std::string>("amplitude")) {
      sine.amplitude = parse_number(*v, "scenario.amplitude");
    }
    if (auto v = sc.get_optional<std::string>("wavelength")) {
      sine.wavelength = parse_number(*v, "scenario.wavelength");
    }
    setup.scenario.custom_profile = sine;
  } else if (setup.scenario.kind == ScenarioKind::custom) {
    throw ConfigError("scenario.segments: custom scenario needs a profile");
  }

  setup.validate();
  return doc;
}

std::string read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Setup load_config_file(const std::string& path) { return load_config(read_config_file(path)); }

std::string to_config_text(const Setup& s) {
  std::ostringstream out;
  auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
  auto num = [&](const char* key, double value) { kv(key, format_number(value)); };

  out << "[simulation]\n";
  num("alpha", s.sim.alpha);
  num("time_step", s.sim.dt);
  num("road_step", s.sim.dx);
  num("simulation_time", s.sim.t_end);
  kv("boundary", to_string(s.sim.boundary));
  num("entropy_fix", s.sim.eps_fix);
  num("density_floor", s.sim.density_floor);
  std::string times;
  for (std::size_t i = 0; i < s.sim.output_times.size(); ++i) {
    if (i) times += ", ";
    times += format_number(s.sim.output_times[i]);
  }
  kv("output_times", times);

  out << "\n[road]\n";
  num("length", s.road.length);
  num("width", s.road.width);
  num("class_proportion", s.road.delta);

  for (const auto& [name, p] : {std::pair{"motorcycle", s.moto}, std::pair{"car", s.car}}) {
    out << "\n[" << name << "]\n";
    num("max_speed", p.v_max);
    num("max_area_occupancy", p.ao_max);
    num("pressure_exponent", p.gamma);
    num("relaxation_time", p.tau);
    num("length", p.length);
    num("width", p.width);
  }

  out << "\n[scenario]\n";
  kv("name", to_string(s.scenario.kind));
  kv("velocity", to_string(s.scenario.velocity_rule));
  if (s.scenario.kind == ScenarioKind::custom) {
    if (const auto* sine = std::get_if<SineProfile>(&s.scenario.custom_profile)) {
      num("mean", sine->mean);
      num("amplitude", sine->amplitude);
      num("wavelength", sine->wavelength);
    } else {
      kv("segments", format_segments(std::get<std::vector<ProfileSegment>>(s.scenario.custom_profile)));
    }
  }
  if (!s.scenario.moto_velocity.empty()) {
    kv("motorcycle_velocity", format_segments(s.scenario.moto_velocity));
  }
  if (!s.scenario.car_velocity.empty()) kv("car_velocity", format_segments(s.scenario.car_velocity));
  return out.str();
}

RunResult run_setup(const Setup& setup, const StepObserver& observer) {
  const InitialData init = initial_grid(setup);
  return run(setup.sim, init.grid, init.boundary, setup.closures(), observer);
}

}  // namespace fracar
