#pragma once

// Property suites behind `fracar validate`. Each suite returns one report per
// checked property; sizes are kept small enough to run in a few seconds.

#include <string>
#include <vector>

#include "fracar/oracle.hpp"

namespace fracar::validation {

// model, roe, caputo, stepper, oracle
const std::vector<std::string>& suite_names();

// Throws std::invalid_argument for an unknown suite.
std::vector<oracle::OracleReport> run_suite(const std::string& name);

std::vector<oracle::OracleReport> run_all();

// Observed order log2(e_h / e_{h/2}) for successive errors.
std::vector<double> observed_orders(const std::vector<double>& errors);

// Max-norm error of the L1 scheme on f(t) = t^2 at t = 1 against the quadrature
// oracle, for each dt in `dts`.
std::vector<double> caputo_l1_errors(double alpha, const std::vector<double>& dts);

struct ConvergenceStudy {
  std::vector<double> dx;      // coarse spacings
  std::vector<double> errors;  // max-norm total-density error vs reference
  std::vector<double> orders;
};

// Smooth ring profile, simultaneous (dx, dt) halving from (dx0, dt0) over
// `levels` levels, compared at t_end with fine_grid_reference at
// `reference_factor` times the coarsest resolution.
ConvergenceStudy scheme_convergence(double alpha, double dx0, double dt0, double t_end,
                                    int levels, unsigned reference_factor);

}  // namespace fracar::validation
