#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "dualrail/errors.hpp"
#include "dualrail/parallel.hpp"
#include "dualrail/protocols.hpp"

namespace dualrail {

AveragedOutcome maxwell_average(const VelocityRunner& runner, const VelocityGrid& grid, int threads) {
  if (grid.velocities.empty() || grid.velocities.size() != grid.weights.size()) {
    throw DomainError("velocity grid is empty or inconsistent");
  }
  if (grid.weight_mass < kMinWeightMass) {
    throw ConvergenceError(fmt::format("velocity grid captures only {:.6f} of the Maxwell distribution (need {})",
                                       grid.weight_mass, kMinWeightMass));
  }
  auto outcomes = parallel_map(grid.velocities.size(), [&](std::size_t i) { return runner(grid.velocities[i]); },
                               threads);
  AveragedOutcome avg;
  avg.weight_mass = grid.weight_mass;
  double total = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double w = grid.weights[i];
    const auto& o = outcomes[i];
    total += w;
    avg.mean_population += w * o.ground_population;
    avg.mean_abs_phase += w * std::abs(o.ground_phase);
    avg.mean_r3_leak += w * o.r3_leak;
    avg.mean_rydberg_time += w * o.rydberg_time;
    avg.max_phase_offset_from_pi =
        std::max(avg.max_phase_offset_from_pi, std::abs(std::abs(o.ground_phase) - std::numbers::pi));
    avg.points.push_back({grid.velocities[i], w, std::move(outcomes[i])});
  }
  avg.mean_population /= total;
  avg.mean_abs_phase /= total;
  avg.mean_r3_leak /= total;
  avg.mean_rydberg_time /= total;
  return avg;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "v_mps,z0_um,pop_error,phase_rad,r3_leak,rydberg_time_us\n";
  for (const auto& r : rows) {
    out << fmt::format("{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.v_mps, r.z0_um, r.pop_error, r.phase_rad,
                       r.r3_leak, r.rydberg_time_us);
  }
}

}  // namespace dualrail
