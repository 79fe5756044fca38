#include <cmath>
#include <numbers>

#include "dualrail/errors.hpp"
#include "gate_internal.hpp"

namespace dualrail::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

DriveStage excite_stage(const GateParams& p) { return {StageKind::excite, p.omega, control_pi_time(p)}; }

DriveStage deexcite_stage(const GateParams& p) {
  return {StageKind::deexcite, p.omega_dp, 3.0 * kPi / (kSqrt2 * std::abs(p.omega_dp))};
}

// Target amplitudes in the three wait-window sub-stages.
struct WindowPlan {
  double omega[3];
  double duration[3];
};

WindowPlan window_plan(const GateParams& p) {
  const double t_pi = target_pi_time(p);
  const double t_restore = target_restore_time(p);
  return {{p.omega_t, p.target_deexcite_omega(), 0.0}, {t_pi, t_restore, std::max(0.0, p.t_wait() - t_pi - t_restore)}};
}

}  // namespace

double target_pi_time(const GateParams& p) { return kPi / (kSqrt2 * p.omega_t); }

double target_restore_time(const GateParams& p) {
  return 3.0 * kPi / (kSqrt2 * std::abs(p.target_deexcite_omega()));
}

double control_pi_time(const GateParams& p) { return kPi / (kSqrt2 * p.omega); }

TargetWindow target_window(const GateParams& p, const PropagatorOptions& options) {
  const WindowPlan plan = window_plan(p);
  std::vector<ScheduledStage> stages;
  for (int i = 0; i < 3; ++i) {
    if (plan.duration[i] <= 0.0) continue;
    stages.push_back({"target", plan.duration[i], h_dual_rail(plan.omega[i], p.wavevectors.k_excite, p.target)});
  }
  auto run = run_schedule(ComplexState::basis_state(dual_rail_basis(), "1"), stages, options, control_pi_time(p));
  return {run.final_state, run.rydberg_time};
}

ControlExcite control_excite(const GateParams& p, const PropagatorOptions& options) {
  auto run = run_sequence(ComplexState::basis_state(gap_basis(), "1"), {excite_stage(p)}, p.wavevectors, p.control,
                          options);
  return {run.final_state, run.rydberg_time};
}

GateInputResult control_gap(const GateParams& p, const PropagatorOptions& options) {
  const std::vector<DriveStage> stages{excite_stage(p), {StageKind::wait_with_infrared, p.omega_if, p.t_wait()},
                                       deexcite_stage(p)};
  auto run = run_sequence(ComplexState::basis_state(gap_basis(), "1"), stages, p.wavevectors, p.control, options);
  return {run.final_state.amplitude("1"), run.rydberg_time};
}

GateInputResult dual_rail_11(const GateParams& p, const ControlExcite& a, const TargetWindow& target,
                             const PropagatorOptions& options) {
  const double t1 = control_pi_time(p);
  const double tw = p.t_wait();
  const double k = p.wavevectors.k_excite;
  const double kw = p.wavevectors.k_wait;
  const cplx g = a.state.amplitude("1");

  // Control Rydberg part, target in |1>.
  const LevelBasis& nine = gate_nine_basis();
  ComplexState rydberg{nine, Eigen::VectorXcd::Zero(nine.size())};
  rydberg.amplitudes(nine.index("r11")) = a.state.amplitude("r1");
  rydberg.amplitudes(nine.index("r21")) = a.state.amplitude("r2");
  rydberg.amplitudes(nine.index("r31")) = a.state.amplitude("r3");
  const WindowPlan plan = window_plan(p);
  std::vector<ScheduledStage> stages;
  for (int i = 0; i < 3; ++i) {
    if (plan.duration[i] <= 0.0) continue;
    stages.push_back({"wait", plan.duration[i],
                      h_gate_nine(plan.omega[i], p.omega_if, k, kw, p.control, p.target, p.shifts)});
  }
  const auto wait = run_schedule(rydberg, stages, options, t1);

  // Target-ground sector at the end of the wait, deexcited by the control.
  const cplx target_ground = target.state.amplitude("1");
  ComplexState sector{gap_basis(), Eigen::VectorXcd::Zero(4)};
  sector.amplitudes(0) = g * target_ground;
  sector.amplitudes(1) = wait.final_state.amplitude("r11");
  sector.amplitudes(2) = wait.final_state.amplitude("r21");
  sector.amplitudes(3) = wait.final_state.amplitude("r31");
  const DriveStage deexcite = deexcite_stage(p);
  const auto back = run_schedule(sector, {{"deexcite", deexcite.duration, h_gap_four_level(deexcite, p.wavevectors, p.control)}},
                                 options, t1 + tw);

  // |1 r_t> left over after the target pulses stays single-Rydberg while the
  // control is deexcited (it is blockaded).
  const double leftover = std::norm(g) * (1.0 - std::norm(target_ground)) * deexcite.duration;
  const double t_r =
      a.rydberg_time + wait.rydberg_time + std::norm(g) * target.rydberg_time + back.rydberg_time + leftover;
  return {back.final_state.amplitude("1"), t_r};
}

}  // namespace dualrail::detail

namespace dualrail {

GateInputResult simulate_gate_11_full(const GateParams& p, const PropagatorOptions& options) {
  p.validate(GateMethod::dual_rail);
  using detail::control_pi_time;
  const double k = p.wavevectors.k_excite;
  const Eigen::VectorXd shifts = twelve_level_shifts(p.shifts);
  const auto mask = twelve_level_rydberg_mask();
  const Hamiltonian target_idle = h_dual_rail(0.0, k, p.target);
  auto pair = [&](const Hamiltonian& c, const Hamiltonian& t) { return h_two_atom(c, t, shifts, mask); };

  const double t_pi = detail::target_pi_time(p);
  const double t_restore = detail::target_restore_time(p);
  const double rest = std::max(0.0, p.t_wait() - t_pi - t_restore);
  const DriveStage excite{StageKind::excite, p.omega, control_pi_time(p)};
  const DriveStage infrared{StageKind::wait_with_infrared, p.omega_if, p.t_wait()};
  const DriveStage deexcite{StageKind::deexcite, p.omega_dp, 3.0 * std::numbers::pi / (std::numbers::sqrt2 * std::abs(p.omega_dp))};
  const Hamiltonian ir = h_gap_four_level(infrared, p.wavevectors, p.control);

  std::vector<ScheduledStage> stages{
      {"excite", excite.duration, pair(h_gap_four_level(excite, p.wavevectors, p.control), target_idle)},
      {"target_pi", t_pi, pair(ir, h_dual_rail(p.omega_t, k, p.target))},
      {"target_restore", t_restore, pair(ir, h_dual_rail(p.target_deexcite_omega(), k, p.target))}};
  if (rest > 0.0) stages.push_back({"wait", rest, pair(ir, target_idle)});
  stages.push_back({"deexcite", deexcite.duration, pair(h_gap_four_level(deexcite, p.wavevectors, p.control), target_idle)});

  const auto& basis = stages.front().hamiltonian.basis;
  const auto run = run_schedule(ComplexState::basis_state(basis, "11"), stages, options);
  return {run.final_state.amplitude("11"), run.rydberg_time};
}

}  // namespace dualrail
