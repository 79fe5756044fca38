#include <cmath>
#include <numbers>

#include "dualrail/errors.hpp"
#include "dualrail/protocols.hpp"

namespace dualrail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

ProtocolOutcome outcome_from(TrajectoryResult traj, std::string_view ground) {
  ProtocolOutcome out;
  const cplx g = traj.final_state.amplitude(ground);
  out.ground_population = std::norm(g);
  out.ground_phase = principal_phase(g);
  out.rydberg_time = traj.rydberg_time;
  out.duration = traj.duration();
  out.trajectory = std::move(traj);
  return out;
}

}  // namespace

std::vector<ScheduledStage> restore_schedule(const SimulationParams& p, double k) {
  if (!(p.omega > 0.0)) throw DomainError("excitation Rabi frequency must be positive");
  if (p.omega_dp == 0.0) throw DomainError("deexcitation Rabi frequency must be nonzero");
  const Motion m{p.z0_um, p.v_mps};
  return {{"excite", kPi / (kSqrt2 * p.omega), h_dual_rail(p.omega, k, m)},
          {"deexcite", 3.0 * kPi / (kSqrt2 * std::abs(p.omega_dp)), h_dual_rail(p.omega_dp, k, m)}};
}

ProtocolOutcome run_excite_restore(const SimulationParams& p, double k, const PropagatorOptions& options) {
  p.validate(false);
  return outcome_from(run_schedule(ComplexState::basis_state(dual_rail_basis(), "1"), restore_schedule(p, k), options),
                      "1");
}

std::vector<DriveStage> gap_stages(const SimulationParams& p) {
  p.validate(true);
  std::vector<DriveStage> stages{{StageKind::excite, p.omega, kPi / (kSqrt2 * p.omega)}};
  if (p.t_wait_us > 0.0) stages.push_back({StageKind::wait_with_infrared, p.omega_if, p.t_wait_us});
  stages.push_back({StageKind::deexcite, p.omega_dp, 3.0 * kPi / (kSqrt2 * std::abs(p.omega_dp))});
  return stages;
}

ProtocolOutcome run_gap_protocol(const SimulationParams& p, const WavevectorSet& wavevectors,
                                 const PropagatorOptions& options) {
  const auto stages = gap_stages(p);
  auto traj = run_sequence(ComplexState::basis_state(gap_basis(), "1"), stages, wavevectors, {p.z0_um, p.v_mps},
                           options);
  // r3 population at the end of the wait (before deexcitation)
  const double leak = stages.size() == 3 ? traj.stage_end_states[1].population("r3") : 0.0;
  ProtocolOutcome out = outcome_from(std::move(traj), "1");
  out.r3_leak = leak;
  return out;
}

std::vector<ScheduledStage> traditional_schedule(const SimulationParams& p, double k) {
  if (!(p.omega > 0.0)) throw DomainError("Rabi frequency must be positive");
  const Motion m{p.z0_um, p.v_mps};
  const double t_pi = kPi / p.omega;
  std::vector<ScheduledStage> stages{{"excite", t_pi, h_single_rail(p.omega, k, m)}};
  if (p.t_wait_us > 0.0) stages.push_back({"wait", p.t_wait_us, h_zero(single_rail_basis())});
  stages.push_back({"deexcite", t_pi, h_single_rail(p.omega, k, m)});
  return stages;
}

ProtocolOutcome run_traditional_restore(const SimulationParams& p, double k, const PropagatorOptions& options) {
  p.validate(false);
  return outcome_from(
      run_schedule(ComplexState::basis_state(single_rail_basis(), "1"), traditional_schedule(p, k), options), "1");
}

}  // namespace dualrail
