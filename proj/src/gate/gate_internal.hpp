#pragma once

#include "dualrail/gate.hpp"

namespace dualrail::detail {

double target_pi_time(const GateParams& p);
double target_restore_time(const GateParams& p);
double control_pi_time(const GateParams& p);

/// Target dual-rail evolution over the wait window [t1, t1 + t_w].
struct TargetWindow {
  ComplexState state;  // {r2, r1, 1} at the end of the window
  double rydberg_time = 0.0;
};
TargetWindow target_window(const GateParams& p, const PropagatorOptions& options);

/// Control {1, r1, r2, r3} state after the excitation pulse.
struct ControlExcite {
  ComplexState state;
  double rydberg_time = 0.0;
};
ControlExcite control_excite(const GateParams& p, const PropagatorOptions& options);

/// Full control gap protocol (input |10>).
GateInputResult control_gap(const GateParams& p, const PropagatorOptions& options);

/// Input |11>: the control Rydberg part evolves in the nine-level model, the
/// control-ground part follows the target window, and the target-ground
/// sector is deexcited coherently.
GateInputResult dual_rail_11(const GateParams& p, const ControlExcite& a, const TargetWindow& target,
                             const PropagatorOptions& options);

GateInputResult traditional_01(const GateParams& p, const PropagatorOptions& options);
GateInputResult traditional_10(const GateParams& p, const PropagatorOptions& options);
GateInputResult traditional_11(const GateParams& p, const PropagatorOptions& options);

}  // namespace dualrail::detail
