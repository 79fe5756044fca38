#include "dualrail/maxwell.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "dualrail/errors.hpp"

namespace dualrail {

namespace {

double kinetic_scale(double temperature_uk, const AtomSpecies& species) {
  if (!(temperature_uk > 0.0)) throw DomainError("temperature must be positive");
  species.validate();
  return constants::kBoltzmann * temperature_uk * 1.0e-6 / species.mass_kg;  // (m/s)^2
}

VelocityGrid normalize(std::vector<double> velocities, double temperature_uk, const AtomSpecies& species) {
  const double sigma2 = kinetic_scale(temperature_uk, species);
  VelocityGrid grid;
  grid.weights.reserve(velocities.size());
  for (double v : velocities) grid.weights.push_back(std::exp(-v * v / (2.0 * sigma2)));
  const double total = std::accumulate(grid.weights.begin(), grid.weights.end(), 0.0);
  for (double& w : grid.weights) w /= total;
  if (velocities.size() > 1) {
    const double dv = (velocities.back() - velocities.front()) / static_cast<double>(velocities.size() - 1);
    grid.weight_mass = total * dv / std::sqrt(2.0 * std::numbers::pi * sigma2);
  } else {
    grid.weight_mass = 1.0;
  }
  grid.velocities = std::move(velocities);
  return grid;
}

}  // namespace

double maxwell_weight(double v_mps, double temperature_uk, const AtomSpecies& species) {
  const double sigma2 = kinetic_scale(temperature_uk, species);
  return std::exp(-v_mps * v_mps / (2.0 * sigma2));
}

double thermal_speed(double temperature_uk, const AtomSpecies& species) {
  return std::sqrt(kinetic_scale(temperature_uk, species));
}

std::vector<double> uniform_velocities(double lo, double hi, int points) {
  if (points < 1) throw DomainError("velocity grid needs at least one point");
  if (points == 1) return {0.5 * (lo + hi)};
  if (!(hi > lo)) throw DomainError("velocity grid bounds must satisfy lo < hi");
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[i] = lo + (hi - lo) * i / (points - 1);
  // Symmetric grids should be exactly symmetric.
  if (lo == -hi) {
    for (int i = 0; i < points / 2; ++i) v[points - 1 - i] = -v[i];
    if (points % 2 == 1) v[points / 2] = 0.0;
  }
  return v;
}

VelocityGrid thermal_grid(double temperature_uk, const AtomSpecies& species, int points, double span_sigmas) {
  if (!(span_sigmas > 0.0)) throw DomainError("grid span must be positive");
  const double span = span_sigmas * thermal_speed(temperature_uk, species);
  return normalize(uniform_velocities(-span, span, points), temperature_uk, species);
}

VelocityGrid weighted_grid(std::span<const double> velocities, double temperature_uk, const AtomSpecies& species) {
  if (velocities.empty()) throw DomainError("velocity grid is empty");
  return normalize(std::vector<double>(velocities.begin(), velocities.end()), temperature_uk, species);
}

}  // namespace dualrail
