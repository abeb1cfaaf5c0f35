#pragma once

// Closures and state algebra of the two-class (motorcycle, car) Aw-Rascle model.
//
// Conserved vector per cell: U = (rho_m, X_m, rho_c, X_c) with X_i = rho_i (v_i + p_i)
// and pseudo-pressure p_i = (psi_i rho_i)^gamma_i. Densities are normalized (jam
// total = 1), speeds in m/s, vehicle and road dimensions in metres.

#include <array>
#include <cstddef>
#include <vector>

namespace fracar {

inline constexpr double kDefaultDensityFloor = 1e-8;

struct VehicleClassParams {
  double v_max = 0.0;   // m/s
  double ao_max = 0.0;  // area-occupancy cap, (0, 1]
  double gamma = 0.0;   // pressure exponent
  double tau = 0.0;     // relaxation time, s
  double length = 0.0;  // m
  double width = 0.0;   // m

  // Throws DomainError naming the offending field.
  void validate() const;

  static VehicleClassParams motorcycle_defaults();
  static VehicleClassParams car_defaults();
};

struct RoadParams {
  double width = 12.0;    // W, m
  double length = 500.0;  // m
  double delta = 0.9;     // motorcycle proportion, strictly inside (0, 1)

  void validate() const;
};

struct ClassState {
  double rho = 0.0;
  double x_momentum = 0.0;

  friend bool operator==(const ClassState&, const ClassState&) = default;
};

// Four conserved components (rho_m, X_m, rho_c, X_c).
struct Vec4 {
  std::array<double, 4> v{};

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  Vec4& operator+=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec4& operator-=(const Vec4& o) {
    for (std::size_t i = 0; i < 4; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec4& operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
  }
  friend Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend Vec4 operator*(Vec4 a, double s) { return a *= s; }
  friend Vec4 operator*(double s, Vec4 a) { return a *= s; }
  friend bool operator==(const Vec4&, const Vec4&) = default;
};

struct Cell {
  ClassState moto;
  ClassState car;

  Vec4 to_vec() const { return {{moto.rho, moto.x_momentum, car.rho, car.x_momentum}}; }
  static Cell from_vec(const Vec4& u) { return {{u[0], u[1]}, {u[2], u[3]}}; }

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Conserved field on a uniform 1-D grid. Cell i is centred at x_i = i * dx.
struct GridState {
  std::vector<Cell> cells;
  double dx = 0.0;
  std::size_t time_level = 0;

  std::size_t size() const { return cells.size(); }
  double position(std::size_t i) const { return static_cast<double>(i) * dx; }

  // At least 3 cells, dx > 0, nonnegative finite densities.
  void validate() const;
};

struct PsiCoefficients {
  double moto = 0.0;
  double car = 0.0;
};

// psi_m = w_m (l_c (1-delta) + delta l_m / 3) / (W delta)
// psi_c = w_c ((1-delta) l_c + delta l_m / 3) / (W (1-delta))
PsiCoefficients psi_coefficients(const RoadParams& road, const VehicleClassParams& moto,
                                 const VehicleClassParams& car);

// (psi * rho)^gamma
double pressure(double rho, double psi, double gamma);

// AO = psi * rho. The occupancy closure is not given in closed form by the model
// description; psi already aggregates occupied width per proportional density.
double area_occupancy(double rho, double psi);

// Greenshields-type law on area occupancy, zero beyond the cap.
double equilibrium_velocity(double ao, const VehicleClassParams& params);

// Everything the flux and source need for one vehicle class.
struct ClassClosure {
  VehicleClassParams params;
  double psi = 0.0;

  double pressure(double rho) const { return fracar::pressure(rho, psi, params.gamma); }
};

struct Closures {
  ClassClosure moto;
  ClassClosure car;
  double density_floor = kDefaultDensityFloor;

  static Closures make(const RoadParams& road, const VehicleClassParams& moto,
                       const VehicleClassParams& car,
                       double density_floor = kDefaultDensityFloor);
};

struct Primitive {
  double rho = 0.0;
  double v = 0.0;
};

// v = X / rho - p(rho). At or below the density floor the speed is defined as 0.
Primitive conserved_to_primitive(const ClassState& s, double psi, double gamma,
                                 double density_floor = kDefaultDensityFloor);
ClassState primitive_to_conserved(double rho, double v, double psi, double gamma);

// (X - rho p, X^2/rho - p X); zero at or below the density floor.
std::array<double, 2> class_flux(const ClassState& s, double psi, double gamma,
                                 double density_floor = kDefaultDensityFloor);

// rho / tau (v_e(AO) - v) for the momentum slot; density slot is always 0.
double class_source(const ClassState& s, const ClassClosure& closure, double density_floor);

Vec4 physical_flux(const Cell& u, const Closures& closures);
Vec4 source_term(const Cell& u, const Closures& closures);

}  // namespace fracar
