#pragma once

#include <vector>

#include "fracar/model.hpp"

namespace fracar {

// Primitive variables on the grid at one output time.
struct Snapshot {
  double time = 0.0;  // s
  std::vector<double> x;
  std::vector<double> rho_m;
  std::vector<double> v_m;
  std::vector<double> rho_c;
  std::vector<double> v_c;

  std::size_t size() const { return x.size(); }
};

Snapshot make_snapshot(const GridState& grid, double time, const Closures& closures);

}  // namespace fracar
