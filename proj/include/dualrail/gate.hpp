#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dualrail/atom.hpp"
#include "dualrail/hamiltonian.hpp"
#include "dualrail/maxwell.hpp"
#include "dualrail/propagator.hpp"

namespace dualrail {

enum class GateMethod {
  dual_rail,    // dual-rail excitation, infrared gap pumping, 3 pi restore
  traditional,  // single-rail pi - 2 pi - pi with Omega' = sqrt2 Omega
};

const char* to_string(GateMethod m);
/// Accepts "dual_rail"/"ours" and "traditional". Throws DomainError.
GateMethod parse_gate_method(std::string_view name);

/// Second (3 pi) target pulse amplitude in the dual-rail gate.
enum class TargetDeexcitation {
  negative_omega_t,  // -Omega_t
  omega_dp,          // the control deexcitation amplitude Omega_dp
};

struct GateParams {
  double omega = 0.0;     // control excitation, rad/us
  double omega_dp = 0.0;  // control deexcitation (signed)
  double omega_t = 0.0;   // target
  double omega_if = 0.0;  // control infrared
  int n_gap_cycles = 1;
  Motion control;
  Motion target;
  InteractionShifts shifts;
  WavevectorSet wavevectors;
  double tau_us = 787.0;
  TargetDeexcitation target_deexcitation = TargetDeexcitation::negative_omega_t;

  double t_wait() const;               // 4 n pi / (sqrt2 Omega_IF)
  double target_deexcite_omega() const;
  /// Throws DomainError for invalid amplitudes or when the target pulses do
  /// not fit in the wait window.
  void validate(GateMethod method) const;
};

/// Reference gate-table parameters for the default preset: Omega/2pi = Omega_t/2pi =
/// Omega_IF/2pi = 2 MHz, Omega_dp/2pi = -2.0339 MHz, L = 7 um.
GateParams reference_gate_params(int n_gap_cycles);

/// pi/(sqrt2 Omega) + t_w + 3 pi/(sqrt2 |Omega_dp|), or 2 pi/Omega' + t_w.
double gate_duration(const GateParams& p, GateMethod method);

struct GateInputResult {
  cplx amplitude = 0.0;
  double rydberg_time = 0.0;  // single-Rydberg residence, us
};

/// Diagonal amplitude <in|U|in> for input "00", "01", "10" or "11".
GateInputResult simulate_gate_input(std::string_view input, const GateParams& p, GateMethod method,
                                    const PropagatorOptions& options = {});

/// |11> under the full {1, r1, r2, r3} x {r2, r1, 1} two-atom model (cross-check
/// for the dual-rail decomposition).
GateInputResult simulate_gate_11_full(const GateParams& p, const PropagatorOptions& options = {});

/// Trace-formula rotation error of diag(1, a, b, c) against diag(1, -1, -1, -1).
double rotation_error(cplx a, cplx b, cplx c);

/// [T01 + T10 + T11] / (4 tau).
double decay_error(double t_r01, double t_r10, double t_r11, double tau_us);

/// 7 sqrt2 pi / (4 Omega tau).
double decay_error_estimate(double omega, double tau_us);

/// Closed-form decay error from ideal-pulse residence times for either method.
double decay_error_ideal(const GateParams& p, GateMethod method);

struct GateReport {
  GateMethod method = GateMethod::dual_rail;
  cplx a;  // <01|U|01>
  cplx b;  // <10|U|10>
  cplx c;  // <11|U|11>
  double e_ro = 0.0;
  double e_decay = 0.0;
  double duration = 0.0;
  std::array<double, 3> rydberg_time{};  // inputs 01, 10, 11
};

GateReport simulate_gate(const GateParams& p, GateMethod method, const PropagatorOptions& options = {});

struct GateGridResult {
  double e_ro_bar = 0.0;
  double weight_mass = 0.0;  // per-qubit Maxwell mass captured by the grid
  std::vector<double> velocities;
  std::vector<double> weights;  // per-qubit, normalized
  std::vector<double> e_ro;     // row-major [i_control * n + i_target]
};

/// Weighted double sum of E_ro(v_c, v_t) over `points` velocities per qubit on
/// [-v_max, v_max] with one-dimensional Maxwell weights, normalized by the
/// weight sum. Control and target start at the z0 given in `p`.
GateGridResult averaged_rotation_error(const GateParams& p, double temperature_uk, const AtomSpecies& species,
                                       GateMethod method, int points = 100, double v_max = 0.5,
                                       const PropagatorOptions& options = {}, int threads = 0);

struct FidelityReport {
  double fidelity = 0.0;
  double e_ro_bar = 0.0;
  double e_decay = 0.0;
};

/// F = 1 - E_ro_bar - E_decay with E_decay from the v = 0 residence times.
FidelityReport fidelity(const GateParams& p, double temperature_uk, const AtomSpecies& species, GateMethod method,
                        int points = 100, const PropagatorOptions& options = {}, int threads = 0);

inline constexpr double fidelity_from(double e_ro_bar, double e_decay) { return 1.0 - e_ro_bar - e_decay; }

/// Columns v_c, v_t, E_ro.
void write_gate_grid_csv(std::ostream& out, const GateGridResult& grid);

}  // namespace dualrail
