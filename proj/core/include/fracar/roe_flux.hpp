#pragma once

// Roe-type interface flux for the two-class AR system. The classes decouple in
// the flux, so every operation works on one 2x2 class block at a time.

#include <array>

#include "fracar/model.hpp"

namespace fracar {

inline constexpr double kDefaultEntropyFix = 0.1;  // m/s

// Below this eigenvalue gap the eigenvector basis is treated as degenerate and
// the dissipation falls back to scalar upwinding.
inline constexpr double kDegenerateGap = 1e-10;

using Mat2 = std::array<std::array<double, 2>, 2>;

struct EigenPair {
  double lambda1 = 0.0;  // v - gamma p
  double lambda2 = 0.0;  // v
  std::array<double, 2> r1{};
  std::array<double, 2> r2{};
};

// d(X - rho p, X^2/rho - p X) / d(rho, X). Throws DomainError below the floor.
Mat2 class_jacobian(double rho, double x_momentum, double psi, double gamma,
                    double density_floor = kDefaultDensityFloor);

// Closed-form spectrum: lambda1 = v - gamma p <= lambda2 = v, using rho p'(rho) = gamma p.
// Eigenvectors are (1, lambda + p + gamma p) scaled to unit max-component.
EigenPair eigenstructure(double rho, double x_momentum, double psi, double gamma,
                         double density_floor = kDefaultDensityFloor);

// Arithmetic mean of the conserved variables.
ClassState roe_average(const ClassState& left, const ClassState& right);

// Harten's smoothed |lambda|.
double entropy_fixed_abs(double lambda, double eps_fix);

// R diag(entropy_fixed_abs(lambda)) R^-1 at the given state.
Mat2 dissipation_matrix(const ClassState& state, double psi, double gamma, double eps_fix,
                        double density_floor = kDefaultDensityFloor);

// 0.5 (f_L + f_R) - 0.5 |B| (U_R - U_L) for one class, |B| taken at roe_average(L, R).
std::array<double, 2> class_numerical_flux(const ClassState& left, const ClassState& right,
                                           const ClassClosure& closure, double eps_fix,
                                           double density_floor);

Vec4 numerical_flux(const Cell& left, const Cell& right, const Closures& closures,
                    double eps_fix = kDefaultEntropyFix);

}  // namespace fracar
