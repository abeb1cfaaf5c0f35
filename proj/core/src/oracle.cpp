#include "fracar/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fracar/errors.hpp"
#include "fracar/roe_flux.hpp"

namespace fracar::oracle {

OracleReport check(std::string name, double observed, double reference, double tolerance,
                   bool relative) {
  const double err = std::abs(observed - reference);
  const double bound = relative ? tolerance * std::abs(reference) : tolerance;
  return {std::move(name), observed, reference, tolerance, relative, err <= bound};
}

OracleReport check_at_most(std::string name, double observed, double bound) {
  return {std::move(name), observed, bound, 0.0, false, observed <= bound};
}

OracleReport check_at_least(std::string name, double observed, double bound) {
  return {std::move(name), observed, bound, 0.0, false, observed >= bound};
}

std::string reports_csv(const std::vector<OracleReport>& reports) {
  std::ostringstream out;
  out << "name,observed,reference,tolerance,mode,pass\n";
  char buf[160];
  for (const OracleReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.3g,%s,%s", r.observed, r.reference,
                  r.tolerance, r.relative ? "relative" : "absolute", r.pass ? "pass" : "FAIL");
    out << r.name << ',' << buf << '\n';
  }
  return out.str();
}

double caputo_quadrature(const std::function<double(double)>& df, double t, double alpha,
                         std::size_t n_nodes) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("caputo_quadrature requires alpha in (0, 1); use the ordinary derivative");
  }
  if (n_nodes < 64) throw DomainError("caputo_quadrature: n_nodes must be >= 64");
  if (t == 0.0) return 0.0;

  static constexpr std::array<double, 5> nodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights{0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};
  const double exponent = 1.0 / (1.0 - alpha);
  const double h = 1.0 / static_cast<double>(n_nodes);
  double sum = 0.0;
  for (std::size_t panel = 0; panel < n_nodes; ++panel) {
    const double mid = (static_cast<double>(panel) + 0.5) * h;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
      const double u = mid + 0.5 * h * nodes[q];
      sum += weights[q] * df(t * (1.0 - std::pow(u, exponent)));
    }
  }
  sum *= 0.5 * h;
  return std::pow(t, 1.0 - alpha) / std::tgamma(2.0 - alpha) * sum;
}

std::array<std::array<double, 2>, 2> fd_class_jacobian(double rho, double x_momentum, double psi,
                                                       double gamma, double h) {
  const double h_rho = h * std::max(std::abs(rho), 1e-3);
  const double h_x = h * std::max(std::abs(x_momentum), 1e-3);
  const auto f = [&](double r, double x) { return class_flux({r, x}, psi, gamma, 0.0); };
  const auto fr_p = f(rho + h_rho, x_momentum);
  const auto fr_m = f(rho - h_rho, x_momentum);
  const auto fx_p = f(rho, x_momentum + h_x);
  const auto fx_m = f(rho, x_momentum - h_x);
  std::array<std::array<double, 2>, 2> j{};
  for (int row = 0; row < 2; ++row) {
    j[row][0] = (fr_p[row] - fr_m[row]) / (2.0 * h_rho);
    j[row][1] = (fx_p[row] - fx_m[row]) / (2.0 * h_x);
  }
  return j;
}

std::array<double, 2> eigenvalues_2x2(const std::array<std::array<double, 2>, 2>& m) {
  const double half_trace = 0.5 * (m[0][0] + m[1][1]);
  const double half_diff = 0.5 * (m[0][0] - m[1][1]);
  const double disc = half_diff * half_diff + m[0][1] * m[1][0];
  const double root = std::sqrt(std::max(disc, 0.0));
  return {half_trace - root, half_trace + root};
}

double harten(double lambda, double eps) {
  return std::abs(lambda) < eps ? 0.5 * (lambda * lambda / eps + eps) : std::abs(lambda);
}

std::array<double, 2> closed_form_roe_flux(const ClassState& l, const ClassState& r,
                                           const ClassClosure& cl, double eps, double floor) {
  const double gamma = cl.params.gamma;
  const auto fl = class_flux(l, cl.psi, gamma, floor);
  const auto fr = class_flux(r, cl.psi, gamma, floor);
  std::array<double, 2> f{0.5 * (fl[0] + fr[0]), 0.5 * (fl[1] + fr[1])};

  const double rho = 0.5 * (l.rho + r.rho);
  const double x = 0.5 * (l.x_momentum + r.x_momentum);
  if (rho < floor) return f;
  const double d0 = r.rho - l.rho;
  const double d1 = r.x_momentum - l.x_momentum;

  const double p = cl.pressure(rho);
  const double u = x / rho;  // v + p
  const double lam_slow = u - p - gamma * p;
  const double lam_fast = u - p;
  const double a_slow = harten(lam_slow, eps);
  const double a_fast = harten(lam_fast, eps);

  double diss0 = 0.0, diss1 = 0.0;
  if (lam_fast - lam_slow < 1e-10) {
    diss0 = a_fast * d0;
    diss1 = a_fast * d1;
  } else {
    const double a00 = -(p + gamma * p), a01 = 1.0;
    const double a10 = -u * u - gamma * p * u, a11 = 2.0 * u - p;
    // |A| d = (a_fast (A - lam_slow) d - a_slow (A - lam_fast) d) / (lam_fast - lam_slow)
    const double ad0 = a00 * d0 + a01 * d1;
    const double ad1 = a10 * d0 + a11 * d1;
    const double gap = lam_fast - lam_slow;
    diss0 = (a_fast * (ad0 - lam_slow * d0) - a_slow * (ad0 - lam_fast * d0)) / gap;
    diss1 = (a_fast * (ad1 - lam_slow * d1) - a_slow * (ad1 - lam_fast * d1)) / gap;
  }
  f[0] -= 0.5 * diss0;
  f[1] -= 0.5 * diss1;
  return f;
}

GridState classical_step_reference(const GridState& state, const SimConfig& config,
                                   const Closures& closures, const BoundaryData& boundary) {
  if (config.alpha != 1.0) {
    throw DomainError("classical_step_reference is only defined for alpha = 1");
  }
  const std::size_t n = state.size();
  const bool periodic = config.boundary == BoundaryMode::periodic;
  const double floor = closures.density_floor;

  auto interface_flux = [&](std::size_t i, std::size_t j) {
    return numerical_flux(state.cells[i], state.cells[j], closures, config.eps_fix);
  };

  GridState next = state;
  next.time_level = state.time_level + 1;
  const double lambda = config.dt / config.dx;
  for (std::size_t i = 0; i < n; ++i) {
    if (!periodic && (i == 0 || i == n - 1)) continue;
    const auto right = interface_flux(i, (i + 1) % n);
    const auto left = interface_flux((i + n - 1) % n, i);
    const Vec4 s = source_term(state.cells[i], closures);
    const Vec4 u = state.cells[i].to_vec();
    Vec4 out;
    for (std::size_t c = 0; c < 4; ++c) {
      out[c] = u[c] - lambda * (right[c] - left[c]) + config.dt * s[c];
    }
    next.cells[i] = Cell::from_vec(out);
  }
  if (!periodic) {
    const double t = static_cast<double>(next.time_level) * config.dt;
    next.cells.front() = boundary.left(t);
    next.cells.back() = boundary.right(t);
  }
  for (Cell& c : next.cells) {
    for (auto [s, cl] : {std::pair{&c.moto, &closures.moto}, std::pair{&c.car, &closures.car}}) {
      if (s->rho < floor) *s = {floor, floor * cl->pressure(floor)};
    }
  }
  return next;
}

std::array<double, 2> riemann_reference_flux(const ClassState& left, const ClassState& right,
                                             const ClassClosure& closure, double density_floor,
                                             std::size_t cells) {
  const double gamma = closure.params.gamma;
  auto speeds = [&](const ClassState& s) {
    if (s.rho < density_floor) return 0.0;
    const double p = closure.pressure(s.rho);
    const double v = s.x_momentum / s.rho - p;
    return std::max(std::abs(v), std::abs(v - gamma * p));
  };
  auto flux = [&](const ClassState& s) { return class_flux(s, closure.psi, gamma, density_floor); };

  const double half_width = 1.0;
  const double dx = 2.0 * half_width / static_cast<double>(cells);
  std::vector<ClassState> u(cells);
  for (std::size_t i = 0; i < cells; ++i) u[i] = i < cells / 2 ? left : right;

  double a_max = std::max(speeds(left), speeds(right));
  const double t_end = 0.8 * half_width / std::max(a_max, 1e-6);
  double t = 0.0;
  double accumulated_time = 0.0;
  std::array<double, 2> accumulated{0.0, 0.0};
  std::vector<std::array<double, 2>> f(cells + 1);
  while (t < t_end) {
    a_max = 0.0;
    for (const ClassState& s : u) a_max = std::max(a_max, speeds(s));
    const double dt = std::min(0.4 * dx / std::max(a_max, 1e-6), t_end - t);
    for (std::size_t k = 0; k <= cells; ++k) {
      const ClassState& l = u[k == 0 ? 0 : k - 1];
      const ClassState& r = u[k == cells ? cells - 1 : k];
      const auto fl = flux(l);
      const auto fr = flux(r);
      const double a = std::max(speeds(l), speeds(r));
      f[k] = {0.5 * (fl[0] + fr[0]) - 0.5 * a * (r.rho - l.rho),
              0.5 * (fl[1] + fr[1]) - 0.5 * a * (r.x_momentum - l.x_momentum)};
    }
    if (t >= 0.5 * t_end) {
      accumulated[0] += dt * f[cells / 2][0];
      accumulated[1] += dt * f[cells / 2][1];
      accumulated_time += dt;
    }
    for (std::size_t i = 0; i < cells; ++i) {
      u[i].rho -= dt / dx * (f[i + 1][0] - f[i][0]);
      u[i].x_momentum -= dt / dx * (f[i + 1][1] - f[i][1]);
    }
    t += dt;
  }
  return {accumulated[0] / accumulated_time, accumulated[1] / accumulated_time};
}

GridState restrict_grid(const GridState& fine, unsigned factor) {
  if (factor == 0) throw DomainError("restrict_grid: factor must be >= 1");
  const std::size_t nf = fine.size();
  if (nf % factor != 0) throw DomainError("restrict_grid: fine grid not divisible by factor");
  const std::size_t nc = nf / factor;
  GridState coarse;
  coarse.dx = fine.dx * factor;
  coarse.time_level = fine.time_level / factor;
  coarse.cells.resize(nc);
  const long f = static_cast<long>(factor);
  const long n = static_cast<long>(nf);
  for (std::size_t i = 0; i < nc; ++i) {
    const long centre = static_cast<long>(i) * f;
    Vec4 sum;
    // Coarse cell [x_i - dx/2, x_i + dx/2] holds f fine cells; for even f the two
    // outermost fine cells straddle its faces and count half.
    const long half = f / 2;
    for (long j = centre - half; j <= centre + half; ++j) {
      const double w = (f % 2 == 0 && (j == centre - half || j == centre + half)) ? 0.5 : 1.0;
      sum += w * fine.cells[static_cast<std::size_t>(((j % n) + n) % n)].to_vec();
    }
    coarse.cells[i] = Cell::from_vec(sum * (1.0 / static_cast<double>(factor)));
  }
  return coarse;
}

std::vector<Snapshot> fine_grid_reference(const Setup& setup, unsigned factor,
                                          std::size_t max_history_bytes) {
  if (factor == 0) throw DomainError("fine_grid_reference: factor must be >= 1");
  Setup fine = setup;
  fine.sim.dx = setup.sim.dx / factor;
  fine.sim.dt = setup.sim.dt / factor;
  const std::size_t fine_cells = setup.cell_count() * factor;
  const std::size_t fine_steps = setup.sim.step_count() * factor;
  const double bytes = static_cast<double>(fine_cells) * static_cast<double>(fine_steps) *
                       static_cast<double>(sizeof(Vec4));
  if (bytes > static_cast<double>(max_history_bytes)) {
    throw DomainError("fine_grid_reference: history of " + std::to_string(bytes / 1e9) +
                      " GB exceeds the configured limit");
  }

  const InitialData init = initial_grid(fine);
  const Closures closures = fine.closures();
  Stepper stepper(fine.sim, closures, init.boundary, init.grid);

  std::vector<std::size_t> coarse_steps;
  for (double t : setup.sim.output_times) coarse_steps.push_back(setup.sim.step_for_time(t));
  std::sort(coarse_steps.begin(), coarse_steps.end());
  coarse_steps.erase(std::unique(coarse_steps.begin(), coarse_steps.end()), coarse_steps.end());

  std::vector<Snapshot> out;
  for (std::size_t target : coarse_steps) {
    while (stepper.state().time_level < target * factor) stepper.step();
    const double t = static_cast<double>(target) * setup.sim.dt;
    out.push_back(make_snapshot(restrict_grid(stepper.state(), factor), t, closures));
  }
  return out;
}

}  // namespace fracar::oracle
