#include "dualrail/gate.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <ostream>

#include "dualrail/errors.hpp"
#include "dualrail/presets.hpp"
#include "dualrail/units.hpp"
#include "gate_internal.hpp"

namespace dualrail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

}  // namespace

const char* to_string(GateMethod m) { return m == GateMethod::dual_rail ? "dual_rail" : "traditional"; }

GateMethod parse_gate_method(std::string_view name) {
  if (name == "dual_rail" || name == "ours") return GateMethod::dual_rail;
  if (name == "traditional") return GateMethod::traditional;
  throw DomainError(fmt::format("unknown gate method '{}'", name));
}

double GateParams::t_wait() const { return SimulationParams::gap_wait_time(n_gap_cycles, omega_if); }

double GateParams::target_deexcite_omega() const {
  return target_deexcitation == TargetDeexcitation::negative_omega_t ? -omega_t : omega_dp;
}

void GateParams::validate(GateMethod method) const {
  if (!(omega > 0.0) || !(omega_t > 0.0)) throw DomainError("gate Rabi frequencies must be positive");
  if (!(tau_us > 0.0)) throw DomainError("Rydberg lifetime must be positive");
  if (n_gap_cycles < 1) throw DomainError("the gate needs at least one gap cycle");
  if (!(omega_if > 0.0)) throw DomainError("infrared Rabi frequency must be positive");
  const double tw = t_wait();
  if (method == GateMethod::dual_rail) {
    if (omega_dp == 0.0) throw DomainError("deexcitation Rabi frequency must be nonzero");
    const double pulses = detail::target_pi_time(*this) + detail::target_restore_time(*this);
    if (pulses > tw * (1.0 + 1e-12)) {
      throw DomainError(fmt::format("target pulses ({:.6g} us) exceed the wait time ({:.6g} us)", pulses, tw));
    }
  } else {
    const double pulses = 2.0 * kPi / (kSqrt2 * omega_t);
    if (pulses > tw * (1.0 + 1e-12)) {
      throw DomainError(fmt::format("target 2 pi pulse ({:.6g} us) exceeds the wait time ({:.6g} us)", pulses, tw));
    }
  }
}

GateParams reference_gate_params(int n_gap_cycles) {
  const auto& cfg = builtin_config(kDefaultPreset);
  GateParams p;
  p.omega = units::mhz_to_rad_per_us(2.0);
  p.omega_dp = units::mhz_to_rad_per_us(-2.0339);
  p.omega_t = units::mhz_to_rad_per_us(2.0);
  p.omega_if = units::mhz_to_rad_per_us(2.0);
  p.n_gap_cycles = n_gap_cycles;
  p.shifts = interaction_shifts(cfg.interactions, cfg.levels);
  p.wavevectors = cfg.wavevectors;
  p.tau_us = cfg.species.rydberg_lifetime_us;
  return p;
}

double gate_duration(const GateParams& p, GateMethod method) {
  if (method == GateMethod::dual_rail) {
    return kPi / (kSqrt2 * p.omega) + p.t_wait() + 3.0 * kPi / (kSqrt2 * std::abs(p.omega_dp));
  }
  return 2.0 * kPi / (kSqrt2 * p.omega) + p.t_wait();
}

double rotation_error(cplx a, cplx b, cplx c) {
  // U^dagger V = diag(1, -a, -b, -c)
  const double trace = std::norm(1.0 - a - b - c);
  const double overlap = 1.0 + std::norm(a) + std::norm(b) + std::norm(c);
  return 1.0 - (trace + overlap) / 20.0;
}

double decay_error(double t_r01, double t_r10, double t_r11, double tau_us) {
  if (!(tau_us > 0.0)) throw DomainError("Rydberg lifetime must be positive");
  return (t_r01 + t_r10 + t_r11) / (4.0 * tau_us);
}

double decay_error_estimate(double omega, double tau_us) {
  if (!(tau_us > 0.0) || !(omega > 0.0)) throw DomainError("Rabi frequency and lifetime must be positive");
  return 7.0 * kSqrt2 * kPi / (4.0 * omega * tau_us);
}

double decay_error_ideal(const GateParams& p, GateMethod method) {
  const double tw = p.t_wait();
  if (method == GateMethod::dual_rail) {
    // Half of every pulse plus the full wait for the control; the target
    // spends half of its pi and 3 pi pulses in Rydberg states.
    const double control = 0.5 * kPi / (kSqrt2 * p.omega) + tw + 0.5 * 3.0 * kPi / (kSqrt2 * std::abs(p.omega_dp));
    const double target = 0.5 * (detail::target_pi_time(p) + detail::target_restore_time(p));
    return decay_error(target, control, control, p.tau_us);
  }
  const double t_pi = kPi / (kSqrt2 * p.omega);
  const double t_pi_target = kPi / (kSqrt2 * p.omega_t);
  return decay_error(t_pi_target, t_pi + tw, t_pi + tw, p.tau_us);
}

GateInputResult simulate_gate_input(std::string_view input, const GateParams& p, GateMethod method,
                                    const PropagatorOptions& options) {
  p.validate(method);
  if (input == "00") return {1.0, 0.0};
  if (input != "01" && input != "10" && input != "11") throw DomainError(fmt::format("unknown gate input '{}'", input));
  if (method == GateMethod::traditional) {
    if (input == "01") return detail::traditional_01(p, options);
    if (input == "10") return detail::traditional_10(p, options);
    return detail::traditional_11(p, options);
  }
  if (input == "01") {
    const auto w = detail::target_window(p, options);
    return {w.state.amplitude("1"), w.rydberg_time};
  }
  if (input == "10") return detail::control_gap(p, options);
  return detail::dual_rail_11(p, detail::control_excite(p, options), detail::target_window(p, options), options);
}

GateReport simulate_gate(const GateParams& p, GateMethod method, const PropagatorOptions& options) {
  GateReport r;
  r.method = method;
  const auto a = simulate_gate_input("01", p, method, options);
  const auto b = simulate_gate_input("10", p, method, options);
  const auto c = simulate_gate_input("11", p, method, options);
  r.a = a.amplitude;
  r.b = b.amplitude;
  r.c = c.amplitude;
  r.rydberg_time = {a.rydberg_time, b.rydberg_time, c.rydberg_time};
  r.e_ro = rotation_error(r.a, r.b, r.c);
  r.e_decay = decay_error(a.rydberg_time, b.rydberg_time, c.rydberg_time, p.tau_us);
  r.duration = gate_duration(p, method);
  return r;
}

void write_gate_grid_csv(std::ostream& out, const GateGridResult& grid) {
  out << "v_c,v_t,E_ro\n";
  const std::size_t n = grid.velocities.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << fmt::format("{:.12g},{:.12g},{:.12g}\n", grid.velocities[i], grid.velocities[j], grid.e_ro[i * n + j]);
    }
  }
}

}  // namespace dualrail
