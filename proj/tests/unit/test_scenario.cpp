#include <gtest/gtest.h>

#include "fracar/errors.hpp"
#include "fracar/scenario.hpp"

namespace fracar {
namespace {

TEST(Profiles, Freeway) {
  EXPECT_EQ(freeway_profile(50.0), 0.1);
  EXPECT_EQ(freeway_profile(99.999), 0.1);
  EXPECT_EQ(freeway_profile(100.0), 0.2);
  EXPECT_EQ(freeway_profile(499.0), 0.2);
}

TEST(Profiles, Congestion) {
  EXPECT_EQ(congestion_profile(160.0), 0.8);
  EXPECT_EQ(congestion_profile(100.0), 0.1);
  EXPECT_EQ(congestion_profile(140.0), 0.1);  // unprescribed band
  EXPECT_EQ(congestion_profile(150.0), 0.1);
  EXPECT_EQ(congestion_profile(180.0), 0.1);
  EXPECT_EQ(congestion_profile(400.0), 0.1);
}

TEST(Profiles, Segments) {
  const std::vector<ProfileSegment> seg{{0.0, 0.1}, {200.0, 0.5}, {300.0, 0.2}};
  EXPECT_EQ(evaluate_segments(seg, 0.0), 0.1);
  EXPECT_EQ(evaluate_segments(seg, 250.0), 0.5);
  EXPECT_EQ(evaluate_segments(seg, 300.0), 0.2);
}

TEST(Split, ByProportion) {
  auto d = split_by_class(0.2, 0.9);
  EXPECT_NEAR(d.moto, 0.18, 1e-16);
  EXPECT_NEAR(d.car, 0.02, 1e-16);
  d = split_by_class(0.2, 0.2);
  EXPECT_NEAR(d.moto, 0.04, 1e-16);
  EXPECT_NEAR(d.car, 0.16, 1e-16);
  for (double delta : {0.13, 0.5, 0.77}) {
    d = split_by_class(0.37, delta);
    EXPECT_DOUBLE_EQ(d.moto + d.car, 0.37);
  }
}

TEST(InitialGrid, FreewayAndCongestionCells) {
  fracar::Setup s;
  const Closures cl = s.closures();
  InitialData init = initial_grid(s);
  ASSERT_EQ(init.grid.size(), 100u);
  const Cell& c = init.grid.cells[10];  // x = 50
  EXPECT_NEAR(c.moto.rho, 0.09, 1e-16);
  const double ve = equilibrium_velocity(area_occupancy(0.09, cl.moto.psi), s.moto);
  EXPECT_NEAR(conserved_to_primitive(c.moto, cl.moto.psi, s.moto.gamma).v, ve, 1e-13);
  EXPECT_NEAR(init.grid.cells[20].moto.rho, 0.18, 1e-16);  // x = 100

  s.scenario.kind = ScenarioKind::congestion;
  s.road.delta = 0.2;
  init = initial_grid(s);
  EXPECT_NEAR(init.grid.cells[32].car.rho, 0.64, 1e-15);  // x = 160
  EXPECT_NEAR(init.grid.cells[28].car.rho, 0.08, 1e-15);  // x = 140
}

TEST(InitialGrid, ExplicitVelocities) {
  fracar::Setup s;
  s.scenario.velocity_rule = VelocityRule::explicit_profiles;
  s.scenario.moto_velocity = {{0.0, 7.0}};
  s.scenario.car_velocity = {{0.0, 9.0}, {250.0, 4.0}};
  const Closures cl = s.closures();
  const InitialData init = initial_grid(s);
  EXPECT_NEAR(conserved_to_primitive(init.grid.cells[5].moto, cl.moto.psi, s.moto.gamma).v, 7.0,
              1e-13);
  EXPECT_NEAR(conserved_to_primitive(init.grid.cells[60].car, cl.car.psi, s.car.gamma).v, 4.0,
              1e-13);
}

TEST(InitialGrid, ProfileOutOfRangeRejected) {
  fracar::Setup s;
  s.scenario.kind = ScenarioKind::custom;
  s.scenario.custom_profile = std::vector<ProfileSegment>{{0.0, 1.5}};
  EXPECT_THROW(initial_grid(s), ConfigError);
}

TEST(Config, EmptyDocumentGivesCalibrationDefaults) {
  const fracar::Setup s = load_config("");
  EXPECT_EQ(s.sim.dt, 0.05);
  EXPECT_EQ(s.sim.dx, 5.0);
  EXPECT_EQ(s.sim.t_end, 60.0);
  EXPECT_EQ(s.sim.alpha, 1.0);
  EXPECT_EQ(s.moto.v_max, 11.0);
  EXPECT_EQ(s.car.v_max, 13.8);
  EXPECT_EQ(s.moto.ao_max, 0.85);
  EXPECT_EQ(s.car.ao_max, 0.74);
  EXPECT_EQ(s.moto.gamma, 2.23);
  EXPECT_EQ(s.car.gamma, 2.12);
  EXPECT_EQ(s.moto.tau, 3.0);
  EXPECT_EQ(s.car.tau, 5.0);
  EXPECT_EQ(s.road.width, 12.0);
  EXPECT_EQ(s.moto.length, 1.8);
  EXPECT_EQ(s.car.length, 4.0);
  EXPECT_EQ(s.car.width, 1.6);
  EXPECT_EQ(s.sim.output_times, (std::vector<double>{0, 1, 20, 40, 60}));
  EXPECT_EQ(s.scenario.kind, ScenarioKind::freeway);
}

TEST(Config, Overrides) {
  const fracar::Setup s = load_config(
      "[simulation]\nalpha = 0.7\nsimulation_time = 30\nboundary = Dirichlet\n"
      "[road]\nclass_proportion = 0.2\n[car]\nrelaxation_time = 4\n"
      "[scenario]\nname = Congestion\n");
  EXPECT_EQ(s.sim.alpha, 0.7);
  EXPECT_EQ(s.sim.boundary, BoundaryMode::dirichlet);
  EXPECT_EQ(s.road.delta, 0.2);
  EXPECT_EQ(s.car.tau, 4.0);
  EXPECT_EQ(s.scenario.kind, ScenarioKind::congestion);
  EXPECT_EQ(s.sim.output_times, (std::vector<double>{0, 1, 20}));
}

TEST(Config, ExplicitKeysReported) {
  const ConfigDocument doc = parse_config("[simulation]\nalpha = 0.9\n[road]\nwidth = 10\n");
  EXPECT_EQ(doc.keys, (std::set<std::string>{"simulation.alpha", "road.width"}));
}

TEST(Config, Rejections) {
  EXPECT_THROW(load_config("[road]\nclass_proportion = 1.0\n"), ConfigError);
  EXPECT_THROW(load_config("[road]\nclass_proportion = 0\n"), ConfigError);
  EXPECT_THROW(load_config("[simulation]\nalpah = 0.7\n"), ConfigError);
  EXPECT_THROW(load_config("[weather]\nrain = 1\n"), ConfigError);
  EXPECT_THROW(load_config("[simulation]\nalpha = fast\n"), ConfigError);
  EXPECT_THROW(load_config("[simulation]\nalpha = 1.2\n"), ConfigError);
  EXPECT_THROW(load_config("[simulation]\nroad_step = 7\n"), ConfigError);
  EXPECT_THROW(load_config("[scenario]\nname = rush\n"), ConfigError);
  EXPECT_THROW(load_config("[scenario]\nsegments = 0:0.1\n"), ConfigError);
  EXPECT_THROW(load_config("[scenario]\nname = custom\n"), ConfigError);
  EXPECT_THROW(load_config("[scenario]\nvelocity = explicit\n"), ConfigError);
  EXPECT_THROW(load_config("alpha = 1\n"), ConfigError);
  EXPECT_THROW(load_config("[simulation\n"), ConfigError);
}

TEST(Config, ErrorNamesKeyPath) {
  try {
    load_config("[motorcycle]\nmax_speed = -3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("v_max"), std::string::npos) << e.what();
  }
  try {
    load_config("[car]\nwheels = 4\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("car.wheels"), std::string::npos) << e.what();
  }
}

TEST(Config, CustomProfiles) {
  fracar::Setup s = load_config("[scenario]\nname = custom\nsegments = 0:0.1, 250:0.4\n");
  EXPECT_EQ(s.scenario.total_density(300.0), 0.4);
  s = load_config("[scenario]\nname = custom\nmean = 0.3\namplitude = 0.05\n");
  EXPECT_NEAR(s.scenario.total_density(125.0), 0.35, 1e-15);
  EXPECT_THROW(load_config("[scenario]\nname = custom\nsegments = 0:0.1\nmean = 0.2\n"),
               ConfigError);
}

TEST(Config, TextRoundTrip) {
  fracar::Setup s;
  s.sim.alpha = 0.8;
  s.sim.dt = 0.025;
  s.road.delta = 0.35;
  s.car.width = 1.7;
  s.scenario.kind = ScenarioKind::custom;
  s.scenario.custom_profile = SineProfile{0.25, 0.05, 250.0};
  s.sim.output_times = {0.0, 7.5};
  const fracar::Setup back = load_config(to_config_text(s));
  EXPECT_EQ(back.sim.alpha, s.sim.alpha);
  EXPECT_EQ(back.sim.dt, s.sim.dt);
  EXPECT_EQ(back.road.delta, s.road.delta);
  EXPECT_EQ(back.car.width, s.car.width);
  EXPECT_EQ(back.sim.output_times, s.sim.output_times);
  EXPECT_EQ(back.scenario.kind, ScenarioKind::custom);
  EXPECT_EQ(std::get<SineProfile>(back.scenario.custom_profile),
            std::get<SineProfile>(s.scenario.custom_profile));
  EXPECT_EQ(to_config_text(back), to_config_text(s));
}

TEST(Config, ProvenanceIgnored) {
  EXPECT_NO_THROW(load_config("[provenance]\nanything = goes\n"));
}

TEST(ScenarioKind, ParseAndPrint) {
  EXPECT_EQ(parse_scenario_kind("FREEWAY"), ScenarioKind::freeway);
  EXPECT_EQ(to_string(ScenarioKind::congestion), "congestion");
  EXPECT_THROW(parse_scenario_kind("ring"), ConfigError);
}

}  // namespace
}  // namespace fracar
