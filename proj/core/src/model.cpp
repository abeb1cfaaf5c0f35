#include "fracar/model.hpp"

#include <cmath>
#include <string>

#include "fracar/errors.hpp"

namespace fracar {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be strictly positive and finite, got " +
                      std::to_string(value));
  }
}

}  // namespace

void VehicleClassParams::validate() const {
  require_positive(v_max, "v_max");
  require_positive(ao_max, "ao_max");
  if (ao_max > 1.0) {
    throw DomainError("ao_max must lie in (0, 1], got " + std::to_string(ao_max));
  }
  require_positive(gamma, "gamma");
  require_positive(tau, "tau");
  require_positive(length, "length");
  require_positive(width, "width");
}

VehicleClassParams VehicleClassParams::motorcycle_defaults() {
  // Width 0.6 m is not part of the calibration table; 1.8 m x 0.6 m is the
  // usual motorcycle footprint.
  return {.v_max = 11.0, .ao_max = 0.85, .gamma = 2.23, .tau = 3.0, .length = 1.8, .width = 0.6};
}

VehicleClassParams VehicleClassParams::car_defaults() {
  return {.v_max = 13.8, .ao_max = 0.74, .gamma = 2.12, .tau = 5.0, .length = 4.0, .width = 1.6};
}

void RoadParams::validate() const {
  require_positive(width, "road width");
  require_positive(length, "road length");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError("delta must lie strictly inside (0, 1), got " + std::to_string(delta));
  }
}

void GridState::validate() const {
  if (cells.size() < 3) {
    throw DomainError("grid needs at least 3 cells, got " + std::to_string(cells.size()));
  }
  require_positive(dx, "dx");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& c = cells[i];
    for (const ClassState* s : {&c.moto, &c.car}) {
      if (!(s->rho >= 0.0) || !std::isfinite(s->x_momentum)) {
        throw DomainError("invalid state in cell " + std::to_string(i));
      }
    }
  }
}

PsiCoefficients psi_coefficients(const RoadParams& road, const VehicleClassParams& moto,
                                 const VehicleClassParams& car) {
  road.validate();
  const double d = road.delta;
  const double mixed_length = car.length * (1.0 - d) + d * moto.length / 3.0;
  return {
      .moto = moto.width * mixed_length / (road.width * d),
      .car = car.width / (road.width * (1.0 - d)) * mixed_length,
  };
}

double pressure(double rho, double psi, double gamma) {
  if (rho < 0.0) {
    throw DomainError("pressure: negative density " + std::to_string(rho));
  }
  return std::pow(psi * rho, gamma);
}

double area_occupancy(double rho, double psi) {
  if (rho < 0.0) {
    throw DomainError("area_occupancy: negative density " + std::to_string(rho));
  }
  return psi * rho;
}

double equilibrium_velocity(double ao, const VehicleClassParams& params) {
  if (ao > params.ao_max) return 0.0;
  return params.v_max * (1.0 - ao / params.ao_max);
}

Closures Closures::make(const RoadParams& road, const VehicleClassParams& moto,
                        const VehicleClassParams& car, double density_floor) {
  moto.validate();
  car.validate();
  const PsiCoefficients psi = psi_coefficients(road, moto, car);
  return {.moto = {moto, psi.moto}, .car = {car, psi.car}, .density_floor = density_floor};
}

Primitive conserved_to_primitive(const ClassState& s, double psi, double gamma,
                                 double density_floor) {
  if (s.rho <= density_floor) return {s.rho, 0.0};
  return {s.rho, s.x_momentum / s.rho - pressure(s.rho, psi, gamma)};
}

ClassState primitive_to_conserved(double rho, double v, double psi, double gamma) {
  return {rho, rho * (v + pressure(rho, psi, gamma))};
}

std::array<double, 2> class_flux(const ClassState& s, double psi, double gamma,
                                 double density_floor) {
  if (s.rho <= density_floor) return {0.0, 0.0};
  const double p = pressure(s.rho, psi, gamma);
  return {s.x_momentum - s.rho * p, s.x_momentum * s.x_momentum / s.rho - p * s.x_momentum};
}

double class_source(const ClassState& s, const ClassClosure& closure, double density_floor) {
  if (s.rho <= density_floor) return 0.0;
  const double v = conserved_to_primitive(s, closure.psi, closure.params.gamma, density_floor).v;
  const double v_eq = equilibrium_velocity(area_occupancy(s.rho, closure.psi), closure.params);
  return s.rho / closure.params.tau * (v_eq - v);
}

Vec4 physical_flux(const Cell& u, const Closures& closures) {
  const auto fm = class_flux(u.moto, closures.moto.psi, closures.moto.params.gamma,
                             closures.density_floor);
  const auto fc = class_flux(u.car, closures.car.psi, closures.car.params.gamma,
                             closures.density_floor);
  return {{fm[0], fm[1], fc[0], fc[1]}};
}

Vec4 source_term(const Cell& u, const Closures& closures) {
  return {{0.0, class_source(u.moto, closures.moto, closures.density_floor), 0.0,
           class_source(u.car, closures.car, closures.density_floor)}};
}

}  // namespace fracar
