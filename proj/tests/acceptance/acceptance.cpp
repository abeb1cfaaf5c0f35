// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fracar/caputo.hpp"
#include "fracar/oracle.hpp"
#include "fracar/roe_flux.hpp"
#include "fracar/scenario.hpp"
#include "fracar/stepper.hpp"
#include "fracar/validation.hpp"

using namespace fracar;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::printf("[%s] AC%d %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Setup table(ScenarioKind kind, double alpha, double delta) {
  Setup s;
  s.scenario.kind = kind;
  s.sim.alpha = alpha;
  s.road.delta = delta;
  return s;
}

const char* name(ScenarioKind k) { return k == ScenarioKind::freeway ? "freeway" : "congestion"; }

double spread(const Snapshot& s) {
  double lo = s.rho_m[0] + s.rho_c[0], hi = lo;
  for (std::size_t i = 0; i < s.size(); ++i) {
    lo = std::min(lo, s.rho_m[i] + s.rho_c[i]);
    hi = std::max(hi, s.rho_m[i] + s.rho_c[i]);
  }
  return hi - lo;
}

const Snapshot& snapshot_at(const RunResult& r, double t) {
  for (const Snapshot& s : r.snapshots) {
    if (std::abs(s.time - t) < 1e-9) return s;
  }
  throw std::runtime_error("missing snapshot at t=" + std::to_string(t));
}

// 1. alpha = 1 against the classical reference over the full horizon.
void alpha_one_reduction() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (ScenarioKind kind : {ScenarioKind::freeway, ScenarioKind::congestion}) {
    const Setup s = table(kind, 1.0, 0.9);
    const Closures cl = s.closures();
    const InitialData init = initial_grid(s);
    Stepper st(s.sim, cl, init.boundary, init.grid);
    GridState ref = init.grid;
    for (std::size_t k = 0; k < s.sim.step_count(); ++k) {
      st.step();
      ref = oracle::classical_step_reference(ref, s.sim, cl, init.boundary);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const Vec4 a = st.state().cells[i].to_vec(), b = ref.cells[i].to_vec();
        for (std::size_t c = 0; c < 4; ++c) {
          const double diff = std::abs(a[c] - b[c]);
          if (diff > 0.0) worst = std::max(worst, diff / std::abs(b[c]));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, "alpha=1 reduction", worst <= 1e-13 && secs < 5.0,
         fmt("max relative difference %.3g (<= 1e-13) over 1200 steps, freeway + congestion; "
             "%.2f s (< 5 s)",
             worst, secs));
}

// 2. Limit of b_k^{-1} / k^alpha.
void coefficient_limit() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 0.7, 0.9}) {
    const double r = coefficient_limit_check(1000000, a);
    const double rel = std::abs(r - 1.0 / (1.0 - a)) * (1.0 - a);
    ok = ok && rel <= 1e-3;
    detail += fmt("alpha=%.1f ratio %.7f (rel err %.2g); ", a, r, rel);
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 1e-3;
  report(2, "coefficient limit", ok, detail + fmt("%.1f us (< 1 ms)", secs * 1e6));
}

// 3 and 4. Mass drift and bounds over the scenario matrix.
void matrix_runs() {
  const auto t0 = Clock::now();
  double drift = 0.0;
  std::string drift_where;
  double bound_violation = 0.0;
  std::string bound_where = "none";
  for (ScenarioKind kind : {ScenarioKind::freeway, ScenarioKind::congestion}) {
    for (double delta : {0.9, 0.2}) {
      for (double alpha : {1.0, 0.9, 0.8, 0.7}) {
        const Setup s = table(kind, alpha, delta);
        double m0 = -1.0, c0 = -1.0;
        const RunResult r = run_setup(s, [&](const GridState& g) {
          double m = 0.0, c = 0.0;
          for (const Cell& cell : g.cells) {
            m += cell.moto.rho;
            c += cell.car.rho;
          }
          if (m0 < 0.0) {
            m0 = m;
            c0 = c;
          }
          const double d = std::max(std::abs(m - m0) / m0, std::abs(c - c0) / c0);
          if (d > drift) {
            drift = d;
            drift_where = fmt("%s delta=%.1f alpha=%.1f", name(kind), delta, alpha);
          }
        });
        for (const Snapshot& snap : r.snapshots) {
          for (std::size_t i = 0; i < snap.size(); ++i) {
            const double v[] = {-snap.rho_m[i],
                                snap.rho_m[i] - 1.0,
                                -snap.rho_c[i],
                                snap.rho_c[i] - 1.0,
                                -snap.v_m[i],
                                snap.v_m[i] - s.moto.v_max - 1e-9,
                                -snap.v_c[i],
                                snap.v_c[i] - s.car.v_max - 1e-9};
            for (double x : v) {
              if (x > bound_violation) {
                bound_violation = x;
                bound_where = fmt("%s delta=%.1f alpha=%.1f t=%g x=%g", name(kind), delta,
                                  alpha, snap.time, snap.x[i]);
              }
            }
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(3, "mass conservation", drift <= 1e-10 && secs < 60.0,
         fmt("max per-class relative drift %.3g (<= 1e-10, worst %s) over 16 runs x 1200 steps; "
             "%.2f s (< 60 s)",
             drift, drift_where.c_str(), secs));
  report(4, "bounds", bound_violation <= 0.0,
         fmt("max violation %.3g (worst %s) over all snapshots of 16 runs", bound_violation,
             bound_where.c_str()));
}

// 5. L1 accuracy against the quadrature oracle.
void caputo_accuracy() {
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 0.7, 0.9}) {
    const auto orders = validation::observed_orders(
        validation::caputo_l1_errors(a, {1.0 / 40, 1.0 / 80, 1.0 / 160}));
    const double order = *std::min_element(orders.begin(), orders.end());
    std::vector<double> affine;
    for (int j = 0; j <= 40; ++j) affine.push_back(0.5 - 2.0 * j / 40.0);
    const double exact = -2.0 / std::tgamma(2.0 - a);
    const double err = std::abs(caputo_l1_scalar(affine, 1.0 / 40, a) - exact);
    ok = ok && order >= 1.0 && err <= 1e-12;
    detail += fmt("alpha=%.1f order %.3f, affine err %.2g; ", a, order, err);
  }
  report(5, "Caputo L1 accuracy", ok, detail + "(order >= 1, affine <= 1e-12)");
}

// 6. Flux consistency and Jacobian.
void roe_consistency() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double consistency = 0.0, jacobian = 0.0;
  for (int n = 0; n < 1000; ++n) {
    RoadParams road;
    road.delta = 0.05 + 0.9 * u(rng);
    const Closures cl = Closures::make(road, VehicleClassParams::motorcycle_defaults(),
                                       VehicleClassParams::car_defaults());
    auto draw = [&](const ClassClosure& c) {
      return primitive_to_conserved(0.02 + 0.98 * u(rng), c.params.v_max * u(rng), c.psi,
                                    c.params.gamma);
    };
    const Cell cell{draw(cl.moto), draw(cl.car)};
    const Vec4 f = physical_flux(cell, cl);
    const Vec4 fn = numerical_flux(cell, cell, cl);
    for (std::size_t c = 0; c < 4; ++c) {
      consistency = std::max(consistency, std::abs(fn[c] - f[c]) / std::max(1.0, std::abs(f[c])));
    }
    for (auto [s, c] : {std::pair{cell.moto, cl.moto}, std::pair{cell.car, cl.car}}) {
      const Mat2 j = class_jacobian(s.rho, s.x_momentum, c.psi, c.params.gamma);
      const auto fd = oracle::fd_class_jacobian(s.rho, s.x_momentum, c.psi, c.params.gamma);
      double scale = 0.0, diff = 0.0;
      for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 2; ++k) {
          scale = std::max(scale, std::abs(j[r][k]));
          diff = std::max(diff, std::abs(j[r][k] - fd[r][k]));
        }
      }
      jacobian = std::max(jacobian, diff / scale);
    }
  }
  report(6, "Roe consistency and Jacobian", consistency <= 1e-14 && jacobian <= 1e-6,
         fmt("consistency %.3g (<= 1e-14), Jacobian vs central differences %.3g relative "
             "(<= 1e-6), 1000 random states",
             consistency, jacobian));
}

// 7. Self-convergence on a smooth ring profile.
void scheme_convergence() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double a : {1.0, 0.9, 0.8, 0.7}) {
    const auto study = validation::scheme_convergence(a, 20.0, 0.2, 10.0, 3, 16);
    const double order = *std::min_element(study.orders.begin(), study.orders.end());
    ok = ok && order >= 0.8;
    detail += fmt("alpha=%.1f orders", a);
    for (double o : study.orders) detail += fmt(" %.3f", o);
    detail += "; ";
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 120.0;
  report(7, "scheme convergence", ok,
         detail + fmt("dx 20/10/5 m vs 16x reference, max norm (>= 0.8); %.2f s (< 120 s)", secs));
}

// 8. Congestion spread trend across orders.
void spread_trend() {
  bool ok = true;
  std::string detail;
  for (double delta : {0.9, 0.2}) {
    std::vector<double> s1, s60;
    for (double a : {1.0, 0.9, 0.8, 0.7}) {
      const RunResult r = run_setup(table(ScenarioKind::congestion, a, delta));
      s1.push_back(spread(snapshot_at(r, 1.0)));
      s60.push_back(spread(snapshot_at(r, 60.0)));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < s60.size(); ++i) decreasing = decreasing && s60[i] < s60[i - 1];
    const bool classical_retains = s60[0] > 0.5 * s1[0];
    bool fractional_smooth = true;
    for (std::size_t i = 1; i < s60.size(); ++i) {
      fractional_smooth = fractional_smooth && s60[i] < 0.25 * s1[i];
    }
    ok = ok && decreasing && classical_retains && fractional_smooth;
    detail += fmt("delta=%.1f spread(60s) %.4f/%.4f/%.4f/%.4f for alpha 1/0.9/0.8/0.7 "
                  "[%s], retained %.0f%%/%.0f%%/%.0f%%/%.0f%% of 1s spread "
                  "[alpha=1 > 50%%: %s, alpha<1 < 25%%: %s]; ",
                  delta, s60[0], s60[1], s60[2], s60[3],
                  decreasing ? "strictly decreasing" : "not monotone", 100 * s60[0] / s1[0],
                  100 * s60[1] / s1[1], 100 * s60[2] / s1[2], 100 * s60[3] / s1[3],
                  classical_retains ? "yes" : "no", fractional_smooth ? "yes" : "no");
  }
  report(8, "congestion spread trend", ok, detail);
}

// 9. Growth of a small initial perturbation.
void perturbation_growth() {
  double worst = 0.0, worst_final = 0.0;
  std::string where;
  for (double delta : {0.9, 0.2}) {
    for (double a : {1.0, 0.9, 0.8, 0.7}) {
      const Setup s = table(ScenarioKind::freeway, a, delta);
      const Closures cl = s.closures();
      const InitialData init = initial_grid(s);
      GridState perturbed = init.grid;
      std::mt19937_64 rng(99);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double size0 = 0.0;
      for (Cell& c : perturbed.cells) {
        Vec4 v = c.to_vec();
        for (std::size_t k = 0; k < 4; ++k) v[k] += 1e-6 * u(rng);
        c = Cell::from_vec(v);
      }
      for (std::size_t i = 0; i < perturbed.size(); ++i) {
        const Vec4 d = perturbed.cells[i].to_vec() - init.grid.cells[i].to_vec();
        for (std::size_t k = 0; k < 4; ++k) size0 = std::max(size0, std::abs(d[k]));
      }
      Stepper base(s.sim, cl, init.boundary, init.grid);
      Stepper pert(s.sim, cl, init.boundary, perturbed);
      double growth = 0.0, final_growth = 0.0;
      for (std::size_t step = 0; step < s.sim.step_count(); ++step) {
        base.step();
        pert.step();
        double size = 0.0;
        for (std::size_t i = 0; i < perturbed.size(); ++i) {
          const Vec4 d = pert.state().cells[i].to_vec() - base.state().cells[i].to_vec();
          for (std::size_t k = 0; k < 4; ++k) size = std::max(size, std::abs(d[k]));
        }
        final_growth = size / size0;
        growth = std::max(growth, final_growth);
      }
      worst_final = std::max(worst_final, final_growth);
      if (growth > worst) {
        worst = growth;
        where = fmt("delta=%.1f alpha=%.1f", delta, a);
      }
    }
  }
  report(9, "perturbation stability", worst <= 10.0,
         fmt("max growth of a 1e-6 perturbation %.3f (<= 10, worst %s), largest growth at 60 s "
             "%.3f, over 60 s freeway runs, 4 orders x 2 proportions",
             worst, where.c_str(), worst_final));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      alpha_one_reduction, coefficient_limit, matrix_runs,    caputo_accuracy,
      roe_consistency,     scheme_convergence, spread_trend, perturbation_growth};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("[FAIL] criterion aborted: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
