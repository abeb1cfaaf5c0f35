#include "fracar/roe_flux.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracar/errors.hpp"

namespace fracar {

namespace {

void require_above_floor(double rho, double density_floor, const char* where) {
  if (!(rho >= density_floor)) {
    throw DomainError(std::string(where) + ": density " + std::to_string(rho) +
                      " below floor " + std::to_string(density_floor));
  }
}

std::array<double, 2> unit_max(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return {a / scale, b / scale};
}

}  // namespace

Mat2 class_jacobian(double rho, double x_momentum, double psi, double gamma,
                    double density_floor) {
  require_above_floor(rho, density_floor, "class_jacobian");
  const double p = pressure(rho, psi, gamma);
  const double dp = gamma * p / rho;
  const double u = x_momentum / rho;
  return {{{-(p + rho * dp), 1.0}, {-u * u - dp * x_momentum, 2.0 * u - p}}};
}

EigenPair eigenstructure(double rho, double x_momentum, double psi, double gamma,
                         double density_floor) {
  require_above_floor(rho, density_floor, "eigenstructure");
  const double p = pressure(rho, psi, gamma);
  const double v = x_momentum / rho - p;
  EigenPair e;
  e.lambda1 = v - gamma * p;
  e.lambda2 = v;
  // First Jacobian row gives r_2 = (lambda + p + rho p') r_1.
  e.r1 = unit_max(1.0, e.lambda1 + p + gamma * p);
  e.r2 = unit_max(1.0, e.lambda2 + p + gamma * p);
  return e;
}

ClassState roe_average(const ClassState& left, const ClassState& right) {
  return {0.5 * (left.rho + right.rho), 0.5 * (left.x_momentum + right.x_momentum)};
}

double entropy_fixed_abs(double lambda, double eps_fix) {
  const double a = std::abs(lambda);
  if (a >= eps_fix) return a;
  return (lambda * lambda + eps_fix * eps_fix) / (2.0 * eps_fix);
}

Mat2 dissipation_matrix(const ClassState& state, double psi, double gamma, double eps_fix,
                        double density_floor) {
  const EigenPair e = eigenstructure(state.rho, state.x_momentum, psi, gamma, density_floor);
  const double a1 = entropy_fixed_abs(e.lambda1, eps_fix);
  const double a2 = entropy_fixed_abs(e.lambda2, eps_fix);
  if (std::abs(e.lambda2 - e.lambda1) < kDegenerateGap) {
    return {{{a2, 0.0}, {0.0, a2}}};
  }
  // Columns of R are r1, r2.
  const double r11 = e.r1[0], r21 = e.r1[1];
  const double r12 = e.r2[0], r22 = e.r2[1];
  const double det = r11 * r22 - r12 * r21;
  const double i11 = r22 / det, i12 = -r12 / det;
  const double i21 = -r21 / det, i22 = r11 / det;
  return {{{r11 * a1 * i11 + r12 * a2 * i21, r11 * a1 * i12 + r12 * a2 * i22},
           {r21 * a1 * i11 + r22 * a2 * i21, r21 * a1 * i12 + r22 * a2 * i22}}};
}

std::array<double, 2> class_numerical_flux(const ClassState& left, const ClassState& right,
                                           const ClassClosure& closure, double eps_fix,
                                           double density_floor) {
  const double gamma = closure.params.gamma;
  const auto fl = class_flux(left, closure.psi, gamma, density_floor);
  const auto fr = class_flux(right, closure.psi, gamma, density_floor);
  std::array<double, 2> f{0.5 * (fl[0] + fr[0]), 0.5 * (fl[1] + fr[1])};

  const ClassState avg = roe_average(left, right);
  if (avg.rho < density_floor) return f;  // vacuum on both sides

  const double d0 = right.rho - left.rho;
  const double d1 = right.x_momentum - left.x_momentum;
  if (d0 == 0.0 && d1 == 0.0) return f;

  const Mat2 m = dissipation_matrix(avg, closure.psi, gamma, eps_fix, density_floor);
  f[0] -= 0.5 * (m[0][0] * d0 + m[0][1] * d1);
  f[1] -= 0.5 * (m[1][0] * d0 + m[1][1] * d1);
  return f;
}

Vec4 numerical_flux(const Cell& left, const Cell& right, const Closures& closures,
                    double eps_fix) {
  const auto fm = class_numerical_flux(left.moto, right.moto, closures.moto, eps_fix,
                                       closures.density_floor);
  const auto fc = class_numerical_flux(left.car, right.car, closures.car, eps_fix,
                                       closures.density_floor);
  return {{fm[0], fm[1], fc[0], fc[1]}};
}

}  // namespace fracar
