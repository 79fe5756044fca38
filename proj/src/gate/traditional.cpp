#include <cmath>
#include <numbers>

#include "gate_internal.hpp"

namespace dualrail::detail {

namespace {

double omega_prime(double omega) { return std::numbers::sqrt2 * omega; }
double pi_time(const GateParams& p) { return std::numbers::pi / omega_prime(p.omega); }

}  // namespace

GateInputResult traditional_01(const GateParams& p, const PropagatorOptions& options) {
  const double wt = omega_prime(p.omega_t);
  const auto run = run_schedule(ComplexState::basis_state(single_rail_basis(), "1"),
                                {{"target", 2.0 * std::numbers::pi / wt, h_single_rail(wt, p.wavevectors.k_excite, p.target)}},
                                options, pi_time(p));
  return {run.final_state.amplitude("1"), run.rydberg_time};
}

GateInputResult traditional_10(const GateParams& p, const PropagatorOptions& options) {
  const double t_pi = pi_time(p);
  const Hamiltonian pulse = h_single_rail(omega_prime(p.omega), p.wavevectors.k_excite, p.control);
  const auto run = run_schedule(ComplexState::basis_state(single_rail_basis(), "1"),
                                {{"excite", t_pi, pulse}, {"wait", p.t_wait(), h_zero(single_rail_basis())},
                                 {"deexcite", t_pi, pulse}},
                                options);
  return {run.final_state.amplitude("1"), run.rydberg_time};
}

GateInputResult traditional_11(const GateParams& p, const PropagatorOptions& options) {
  const double t_pi = pi_time(p);
  const double wt = omega_prime(p.omega_t);
  const double t_target = 2.0 * std::numbers::pi / wt;
  const double k = p.wavevectors.k_excite;
  const Hamiltonian control = h_single_rail(omega_prime(p.omega), k, p.control);
  const Hamiltonian target = h_single_rail(wt, k, p.target);
  const Hamiltonian idle = h_zero(single_rail_basis());
  // product basis {11, 1r1, r11, r1r1}; only the doubly excited pair is shifted
  const Eigen::VectorXd shifts = Eigen::Vector4d(0.0, 0.0, 0.0, p.shifts.v11);
  const std::vector<bool> mask{false, true, true, false};
  auto pair = [&](const Hamiltonian& c, const Hamiltonian& t) { return h_two_atom(c, t, shifts, mask); };

  std::vector<ScheduledStage> stages{{"excite", t_pi, pair(control, idle)}, {"target", t_target, pair(idle, target)}};
  const double rest = p.t_wait() - t_target;
  if (rest > 0.0) stages.push_back({"wait", rest, pair(idle, idle)});
  stages.push_back({"deexcite", t_pi, pair(control, idle)});
  const auto& basis = stages.front().hamiltonian.basis;
  const auto run = run_schedule(ComplexState::basis_state(basis, "11"), stages, options);
  return {run.final_state.amplitude("11"), run.rydberg_time};
}

}  // namespace dualrail::detail
