#include "fracar/validation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fracar/caputo.hpp"
#include "fracar/roe_flux.hpp"

namespace fracar::validation {

using oracle::check;
using oracle::check_at_least;
using oracle::check_at_most;
using oracle::OracleReport;

namespace {

struct RandomState {
  Cell cell;
  Closures closures;
};

Closures table_closures(double delta) {
  RoadParams road;
  road.delta = delta;
  return Closures::make(road, VehicleClassParams::motorcycle_defaults(),
                        VehicleClassParams::car_defaults());
}

RandomState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double delta = 0.1 + 0.8 * unit(rng);
  RandomState out{{}, table_closures(delta)};
  auto draw = [&](const ClassClosure& cl) {
    const double rho = 0.05 + 0.95 * unit(rng);
    const double v = cl.params.v_max * unit(rng);
    return primitive_to_conserved(rho, v, cl.psi, cl.params.gamma);
  };
  out.cell = {draw(out.closures.moto), draw(out.closures.car)};
  return out;
}

double max_abs_entry(const Mat2& m) {
  double v = 0.0;
  for (const auto& row : m) {
    for (double x : row) v = std::max(v, std::abs(x));
  }
  return v;
}

std::vector<OracleReport> model_suite() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double roundtrip = 0.0, flux_identity = 0.0, source_density = 0.0;
  double eq_monotone_violation = 0.0, pressure_monotone_violation = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const RandomState s = random_state(rng);
    for (const auto& [state, cl] : {std::pair{s.cell.moto, s.closures.moto},
                                    std::pair{s.cell.car, s.closures.car}}) {
      const Primitive p = conserved_to_primitive(state, cl.psi, cl.params.gamma);
      const ClassState back = primitive_to_conserved(p.rho, p.v, cl.psi, cl.params.gamma);
      roundtrip = std::max(roundtrip, std::abs(back.x_momentum - state.x_momentum) /
                                          std::abs(state.x_momentum));
      const auto f = class_flux(state, cl.psi, cl.params.gamma);
      flux_identity = std::max(flux_identity, std::abs(f[0] - p.rho * p.v));

      const double ao = unit(rng);
      const double ao2 = ao + 0.1 * unit(rng);
      eq_monotone_violation =
          std::max(eq_monotone_violation,
                   equilibrium_velocity(ao2, cl.params) - equilibrium_velocity(ao, cl.params));
      const double r2 = p.rho + 0.01;
      pressure_monotone_violation = std::max(
          pressure_monotone_violation,
          pressure(p.rho, cl.psi, cl.params.gamma) - pressure(r2, cl.psi, cl.params.gamma));
    }
    const Vec4 src = source_term(s.cell, s.closures);
    source_density = std::max({source_density, std::abs(src[0]), std::abs(src[2])});
  }
  return {
      check_at_most("model.roundtrip_relative", roundtrip, 1e-12),
      check_at_most("model.flux_mass_identity", flux_identity, 1e-12),
      check("model.source_density_components", source_density, 0.0, 0.0),
      check_at_most("model.equilibrium_nonincreasing", eq_monotone_violation, 0.0),
      check_at_most("model.pressure_increasing", pressure_monotone_violation, 0.0),
      check("model.pressure_at_zero", pressure(0.0, 1.0, 2.0), 0.0, 0.0),
  };
}

std::vector<OracleReport> roe_suite() {
  std::mt19937_64 rng(7);
  double consistency = 0.0, jacobian = 0.0, spectrum = 0.0, dissipation_min = 1.0;
  double block_leak = 0.0, closed_form = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const RandomState s = random_state(rng);
    const Vec4 f = physical_flux(s.cell, s.closures);
    const Vec4 fn = numerical_flux(s.cell, s.cell, s.closures);
    for (std::size_t c = 0; c < 4; ++c) {
      consistency = std::max(consistency, std::abs(fn[c] - f[c]) / std::max(1.0, std::abs(f[c])));
    }
    for (const auto& [state, cl] : {std::pair{s.cell.moto, s.closures.moto},
                                    std::pair{s.cell.car, s.closures.car}}) {
      const Mat2 j = class_jacobian(state.rho, state.x_momentum, cl.psi, cl.params.gamma);
      const auto jfd = oracle::fd_class_jacobian(state.rho, state.x_momentum, cl.psi,
                                                 cl.params.gamma);
      double diff = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) diff = std::max(diff, std::abs(j[r][c] - jfd[r][c]));
      }
      jacobian = std::max(jacobian, diff / max_abs_entry(j));

      const EigenPair e = eigenstructure(state.rho, state.x_momentum, cl.psi, cl.params.gamma);
      // Nearly defective blocks (tiny gamma p) have eigenvalues that no
      // characteristic-polynomial route can resolve to 1e-9.
      if (e.lambda2 - e.lambda1 >= 1e-3) {
        const auto ev = oracle::eigenvalues_2x2(j);
        spectrum = std::max({spectrum, std::abs(ev[0] - e.lambda1), std::abs(ev[1] - e.lambda2)});
      }
      const Mat2 d = dissipation_matrix(state, cl.psi, cl.params.gamma, kDefaultEntropyFix);
      const auto dev = oracle::eigenvalues_2x2(d);
      dissipation_min = std::min(dissipation_min, dev[0]);
    }

    // Perturbing the car block must leave motorcycle flux untouched.
    const RandomState t = random_state(rng);
    Cell left = s.cell, right = t.cell;
    const Vec4 base = numerical_flux(left, right, s.closures);
    left.car.rho *= 1.1;
    right.car.x_momentum *= 0.9;
    const Vec4 moved = numerical_flux(left, right, s.closures);
    block_leak = std::max({block_leak, std::abs(base[0] - moved[0]), std::abs(base[1] - moved[1])});

    // Eigenvector route against the eigenvector-free |A|.
    const auto cm = oracle::closed_form_roe_flux(s.cell.moto, t.cell.moto, s.closures.moto,
                                                 kDefaultEntropyFix, s.closures.density_floor);
    const auto cc = oracle::closed_form_roe_flux(s.cell.car, t.cell.car, s.closures.car,
                                                 kDefaultEntropyFix, s.closures.density_floor);
    const std::array<double, 4> closed{cm[0], cm[1], cc[0], cc[1]};
    for (std::size_t c = 0; c < 4; ++c) {
      closed_form = std::max(closed_form,
                             std::abs(base[c] - closed[c]) / std::max(1.0, std::abs(closed[c])));
    }
  }
  return {
      check_at_most("roe.consistency_identical_states", consistency, 1e-14),
      check_at_most("roe.jacobian_vs_central_difference", jacobian, 1e-6),
      check_at_most("roe.spectrum_vs_characteristic_polynomial", spectrum, 1e-9),
      check_at_least("roe.dissipation_eigenvalues_nonnegative", dissipation_min, 0.0),
      check("roe.block_independence", block_leak, 0.0, 0.0),
      check_at_most("roe.flux_vs_closed_form_dissipation", closed_form, 1e-9),
  };
}

std::vector<OracleReport> caputo_suite() {
  std::vector<OracleReport> out;
  for (double alpha : {0.5, 0.7, 0.9}) {
    const std::string tag = "(alpha=" + std::to_string(alpha).substr(0, 3) + ")";
    // Affine data: L1 is exact.
    std::vector<double> samples;
    const double dt = 1.0 / 37.0;
    for (int j = 0; j <= 37; ++j) samples.push_back(2.0 + 3.0 * j * dt);
    const double exact = 3.0 / std::tgamma(2.0 - alpha);
    out.push_back(check("caputo.l1_affine_exact" + tag, caputo_l1_scalar(samples, dt, alpha),
                        exact, 1e-12, true));
    out.push_back(check("caputo.coefficient_limit_k1e6" + tag,
                        coefficient_limit_check(1000000, alpha), 1.0 / (1.0 - alpha), 1e-3, true));
    const auto orders = observed_orders(caputo_l1_errors(alpha, {1.0 / 40, 1.0 / 80, 1.0 / 160}));
    out.push_back(check_at_least("caputo.l1_order_t2" + tag,
                                 *std::min_element(orders.begin(), orders.end()), 1.0));
    const L1Weights w = l1_weights(50, alpha);
    bool ordered = w.coefficients.front() > 0.0;
    for (std::size_t j = 1; j < w.coefficients.size(); ++j) {
      ordered = ordered && w.coefficients[j] >= w.coefficients[j - 1];
    }
    out.push_back(check("caputo.weights_positive_nondecreasing" + tag, ordered ? 1.0 : 0.0, 1.0,
                        0.0));
  }
  return out;
}

std::vector<OracleReport> stepper_suite() {
  std::vector<OracleReport> out;
  for (double alpha : {1.0, 0.9, 0.8, 0.7}) {
    Setup setup;
    setup.scenario.kind = ScenarioKind::congestion;
    setup.sim.alpha = alpha;
    setup.sim.t_end = 10.0;
    setup.sim.output_times = {0.0, 10.0};
    double m0 = -1.0, c0 = -1.0, drift = 0.0;
    run_setup(setup, [&](const GridState& g) {
      double m = 0.0, c = 0.0;
      for (const Cell& cell : g.cells) {
        m += cell.moto.rho;
        c += cell.car.rho;
      }
      if (m0 < 0.0) {
        m0 = m;
        c0 = c;
      }
      drift = std::max({drift, std::abs(m - m0) / m0, std::abs(c - c0) / c0});
    });
    out.push_back(check_at_most("stepper.mass_drift(alpha=" + std::to_string(alpha).substr(0, 3) +
                                    ")",
                                drift, 1e-10));
  }

  // alpha = 1 against the classical reference over 200 steps.
  for (ScenarioKind kind : {ScenarioKind::freeway, ScenarioKind::congestion}) {
    Setup setup;
    setup.scenario.kind = kind;
    setup.sim.t_end = 10.0;
    setup.sim.output_times = {10.0};
    const InitialData init = initial_grid(setup);
    const Closures closures = setup.closures();
    Stepper stepper(setup.sim, closures, init.boundary, init.grid);
    GridState reference = init.grid;
    double worst = 0.0;
    for (std::size_t k = 0; k < setup.sim.step_count(); ++k) {
      stepper.step();
      reference = oracle::classical_step_reference(reference, setup.sim, closures);
      for (std::size_t i = 0; i < reference.size(); ++i) {
        const Vec4 a = stepper.state().cells[i].to_vec();
        const Vec4 b = reference.cells[i].to_vec();
        for (std::size_t c = 0; c < 4; ++c) {
          worst = std::max(worst, std::abs(a[c] - b[c]) / std::max(std::abs(b[c]), 1e-300));
        }
      }
    }
    out.push_back(check_at_most("stepper.alpha1_matches_classical(" + to_string(kind) + ")", worst,
                                1e-13));
  }

  // Uniform equilibrium is a fixed point for every alpha.
  for (double alpha : {1.0, 0.7}) {
    Setup setup;
    setup.scenario.kind = ScenarioKind::custom;
    setup.scenario.custom_profile = std::vector<ProfileSegment>{{0.0, 0.35}};
    setup.sim.alpha = alpha;
    setup.sim.t_end = 5.0;
    setup.sim.output_times = {5.0};
    const InitialData init = initial_grid(setup);
    const RunResult r = run(setup.sim, init.grid, init.boundary, setup.closures());
    double diff = 0.0;
    for (std::size_t i = 0; i < init.grid.size(); ++i) {
      const Vec4 d = r.final_state.cells[i].to_vec() - init.grid.cells[i].to_vec();
      for (double x : d.v) diff = std::max(diff, std::abs(x));
    }
    out.push_back(check("stepper.uniform_fixed_point(alpha=" + std::to_string(alpha).substr(0, 3) +
                            ")",
                        diff, 0.0, 0.0));
  }
  return out;
}

std::vector<OracleReport> oracle_suite() {
  std::vector<OracleReport> out;
  for (double alpha : {0.5, 0.7}) {
    const std::string tag = "(alpha=" + std::to_string(alpha).substr(0, 3) + ")";
    out.push_back(check("oracle.quadrature_t" + tag,
                        oracle::caputo_quadrature([](double) { return 1.0; }, 1.0, alpha, 1024),
                        1.0 / std::tgamma(2.0 - alpha), 1e-8));
    out.push_back(check("oracle.quadrature_t2" + tag,
                        oracle::caputo_quadrature([](double s) { return 2.0 * s; }, 1.0, alpha,
                                                  1024),
                        2.0 / std::tgamma(3.0 - alpha), 1e-8));
  }
  const ConvergenceStudy study = scheme_convergence(0.9, 20.0, 0.2, 10.0, 3, 16);
  out.push_back(check_at_least("oracle.scheme_convergence_order(alpha=0.9)",
                               *std::min_element(study.orders.begin(), study.orders.end()), 0.8));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"model", "roe", "caputo", "stepper", "oracle"};
  return names;
}

std::vector<OracleReport> run_suite(const std::string& name) {
  if (name == "model") return model_suite();
  if (name == "roe") return roe_suite();
  if (name == "caputo") return caputo_suite();
  if (name == "stepper") return stepper_suite();
  if (name == "oracle") return oracle_suite();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

std::vector<OracleReport> run_all() {
  std::vector<OracleReport> all;
  for (const std::string& name : suite_names()) {
    auto part = run_suite(name);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
  std::vector<double> orders;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    orders.push_back(std::log2(errors[i - 1] / errors[i]));
  }
  return orders;
}

std::vector<double> caputo_l1_errors(double alpha, const std::vector<double>& dts) {
  const double reference =
      oracle::caputo_quadrature([](double s) { return 2.0 * s; }, 1.0, alpha, 1024);
  std::vector<double> errors;
  for (double dt : dts) {
    const auto n = static_cast<std::size_t>(std::llround(1.0 / dt));
    std::vector<double> samples(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double t = static_cast<double>(j) * dt;
      samples[j] = t * t;
    }
    errors.push_back(std::abs(caputo_l1_scalar(samples, dt, alpha) - reference));
  }
  return errors;
}

ConvergenceStudy scheme_convergence(double alpha, double dx0, double dt0, double t_end,
                                    int levels, unsigned reference_factor) {
  Setup base;
  base.scenario.kind = ScenarioKind::custom;
  base.scenario.custom_profile = SineProfile{0.3, 0.1, base.road.length};
  base.road.delta = 0.5;
  base.sim.alpha = alpha;
  base.sim.t_end = t_end;
  base.sim.output_times = {t_end};

  Setup fine = base;
  fine.sim.dx = dx0 / reference_factor;
  fine.sim.dt = dt0 / reference_factor;
  const RunResult reference = run_setup(fine);

  ConvergenceStudy study;
  for (int level = 0; level < levels; ++level) {
    const unsigned scale = 1u << level;
    Setup s = base;
    s.sim.dx = dx0 / scale;
    s.sim.dt = dt0 / scale;
    const RunResult coarse = run_setup(s);
    const GridState restricted =
        oracle::restrict_grid(reference.final_state, reference_factor / scale);
    double err = 0.0;
    for (std::size_t i = 0; i < restricted.size(); ++i) {
      err = std::max({err, std::abs(coarse.final_state.cells[i].moto.rho - restricted.cells[i].moto.rho),
                      std::abs(coarse.final_state.cells[i].car.rho - restricted.cells[i].car.rho)});
    }
    study.dx.push_back(s.sim.dx);
    study.errors.push_back(err);
  }
  study.orders = observed_orders(study.errors);
  return study;
}

}  // namespace fracar::validation
