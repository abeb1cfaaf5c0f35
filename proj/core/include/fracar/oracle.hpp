#pragma once

// Reference computations used to check the solver. They share the model
// closures (pressure, flux, source) with the solver and never its Caputo or
// stepping code.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fracar/model.hpp"
#include "fracar/scenario.hpp"
#include "fracar/snapshot.hpp"
#include "fracar/stepper.hpp"

namespace fracar::oracle {

struct OracleReport {
  std::string name;
  double observed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;
};

// |observed - reference| <= tolerance (absolute) or
// |observed - reference| <= tolerance * |reference| (relative).
OracleReport check(std::string name, double observed, double reference, double tolerance,
                   bool relative = false);
// observed <= bound
OracleReport check_at_most(std::string name, double observed, double bound);
// observed >= bound
OracleReport check_at_least(std::string name, double observed, double bound);

std::string reports_csv(const std::vector<OracleReport>& reports);

// Caputo derivative of f at t from its derivative df:
//   1/Gamma(1-alpha) int_0^t (t-s)^-alpha df(s) ds.
// The substitution s = t (1 - u^{1/(1-alpha)}) removes the weakly singular kernel,
// leaving t^{1-alpha}/Gamma(2-alpha) int_0^1 df(t (1 - u^{1/(1-alpha)})) du, which
// is integrated with composite Gauss-Legendre (n_nodes panels of 5 points).
double caputo_quadrature(const std::function<double(double)>& df, double t, double alpha,
                         std::size_t n_nodes);

// Central finite-difference Jacobian of class_flux with relative step h.
std::array<std::array<double, 2>, 2> fd_class_jacobian(double rho, double x_momentum, double psi,
                                                       double gamma, double h = 1e-6);

// Eigenvalues of a 2x2 matrix from its characteristic polynomial, ascending.
std::array<double, 2> eigenvalues_2x2(const std::array<std::array<double, 2>, 2>& m);

// Harten-smoothed |lambda|, coded separately from the solver's.
double harten(double lambda, double eps);

// One class block of the Roe flux with |A| = (|l2| (A - l1 I) - |l1| (A - l2 I)) / (l2 - l1),
// i.e. without eigenvectors. Agrees with the solver's R |L| R^-1 route up to the
// conditioning of the eigenvector basis (~ eps * v / (gamma p)).
std::array<double, 2> closed_form_roe_flux(const ClassState& left, const ClassState& right,
                                           const ClassClosure& closure, double eps_fix,
                                           double density_floor);

// Classical first-order update U - dt/dx [F_{i+1/2} - F_{i-1/2}] + dt S(U) with no
// memory term, written apart from the fractional stepper. It uses the solver's
// interface flux so that the comparison isolates the time discretization.
// Throws DomainError unless config.alpha == 1.
GridState classical_step_reference(const GridState& state, const SimConfig& config,
                                   const Closures& closures, const BoundaryData& boundary = {});

// Godunov-type interface mass/momentum flux of one class block, estimated by a
// refined local Rusanov solve of the Riemann problem (left | right) and
// time-averaging the flux through x = 0.
std::array<double, 2> riemann_reference_flux(const ClassState& left, const ClassState& right,
                                             const ClassClosure& closure, double density_floor,
                                             std::size_t cells = 4000);

// Refined run: same scheme at (dx/f, dt/f), restricted back to the coarse grid
// by averaging conserved variables over each coarse cell. Snapshots are taken at
// the coarse output times. Throws DomainError if the history would exceed
// `max_history_bytes`.
std::vector<Snapshot> fine_grid_reference(const Setup& setup, unsigned factor,
                                          std::size_t max_history_bytes = std::size_t{2} << 30);

// Average conserved states of a fine grid onto a coarse one (factor f, node-centred cells).
GridState restrict_grid(const GridState& fine, unsigned factor);

}  // namespace fracar::oracle
