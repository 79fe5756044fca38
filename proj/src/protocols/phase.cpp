#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualrail/errors.hpp"
#include "dualrail/parallel.hpp"
#include "dualrail/protocols.hpp"

namespace dualrail {

double extract_phase_phi(double omega, double k, double v_mps, const PropagatorOptions& options) {
  if (!(omega > 0.0)) throw DomainError("Rabi frequency must be positive");
  const double t = std::numbers::pi / (std::numbers::sqrt2 * omega);
  const auto s = evolve(ComplexState::basis_state(dual_rail_basis(), "1"), h_dual_rail(omega, k, {0.0, v_mps}), 0.0, t,
                        options);
  const cplx r1 = s.amplitude("r1");
  const cplx r2 = s.amplitude("r2");
  if (std::abs(r1) < 1e-9 || std::abs(r2) < 1e-9) {
    throw ExtractionError(fmt::format("Rydberg amplitudes vanish (|C_r1| = {:.3g}, |C_r2| = {:.3g})", std::abs(r1),
                                      std::abs(r2)));
  }
  // i C_r1 = C_r e^{i phi}, i C_r2 = C_r e^{-i phi}
  return 0.5 * std::arg(r1 * std::conj(r2));
}

PhaseFit fit_phase_linearity(double omega, double k, const std::vector<double>& velocities,
                             const PropagatorOptions& options, int threads) {
  if (velocities.empty()) throw DomainError("phase fit needs at least one velocity");
  for (double v : velocities) {
    if (v == 0.0) throw DomainError("phase fit velocities must be nonzero");
  }
  PhaseFit fit;
  fit.velocities = velocities;
  fit.phases = parallel_map(
      velocities.size(), [&](std::size_t i) { return extract_phase_phi(omega, k, velocities[i], options); }, threads);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < velocities.size(); ++i) {
    const double x = 2.0 * std::numbers::pi * k * velocities[i] / omega;
    fit.ratios.push_back(fit.phases[i] / x);
    sxy += x * fit.phases[i];
    sxx += x * x;
  }
  fit.slope_ratio = sxy / sxx;
  const auto [lo, hi] = std::minmax_element(fit.ratios.begin(), fit.ratios.end());
  fit.min_ratio = *lo;
  fit.max_ratio = *hi;
  for (double r : fit.ratios) fit.residual = std::max(fit.residual, std::abs(r - fit.slope_ratio));
  return fit;
}

}  // namespace dualrail
