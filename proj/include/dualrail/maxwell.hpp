#pragma once

#include <span>
#include <vector>

#include "dualrail/atom.hpp"

namespace dualrail {

/// Unnormalized one-dimensional Maxwell weight exp(-m v^2 / (2 kB T)).
/// T in microkelvin. Throws DomainError for T <= 0.
double maxwell_weight(double v_mps, double temperature_uk, const AtomSpecies& species);

/// sqrt(kB T / m) in m/s.
double thermal_speed(double temperature_uk, const AtomSpecies& species);

struct VelocityGrid {
  std::vector<double> velocities;  // m/s, ascending
  std::vector<double> weights;     // normalized to sum 1
  double weight_mass = 1.0;        // fraction of the continuum density captured
};

/// `points` uniformly spaced velocities on [-span*sigma, span*sigma].
VelocityGrid thermal_grid(double temperature_uk, const AtomSpecies& species, int points = 201,
                          double span_sigmas = 5.0);

/// Weights for an explicit symmetric grid. A single point gets weight 1 and
/// mass 1; otherwise the mass is the Riemann sum of the normalized density.
VelocityGrid weighted_grid(std::span<const double> velocities, double temperature_uk,
                           const AtomSpecies& species);

/// `points` velocities uniformly on [lo, hi] inclusive.
std::vector<double> uniform_velocities(double lo, double hi, int points);

}  // namespace dualrail
