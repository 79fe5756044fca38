#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "dualrail/atom.hpp"
#include "dualrail/maxwell.hpp"
#include "dualrail/propagator.hpp"

namespace dualrail {

// ---- analytic oracles ------------------------------------------------------

struct AnalyticAmplitudes {
  cplx w1;
  cplx w2;
  bool within_validity = true;  // false once kv/Omega exceeds 0.1
};

/// Closed-form r1/r2 amplitudes of the four-field drive for kv << Omega, with
/// (f1, f2) = (sin, cos).
AnalyticAmplitudes analytic_w(double t, double omega, double k, double z0_um, double v_mps);

/// Phase phi with C_r1 = -i C_r e^{i phi}, C_r2 = -i C_r e^{-i phi} after a
/// dual-rail pi pulse from |1> at z0 = 0. Principal branch, phi(v = 0) = 0.
/// Throws ExtractionError when the Rydberg amplitudes vanish.
double extract_phase_phi(double omega, double k, double v_mps, const PropagatorOptions& options = {});

struct PhaseFit {
  double slope_ratio = 0.0;  // least-squares phi / (2 pi k v / Omega)
  double residual = 0.0;     // max |ratio - slope_ratio|
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::vector<double> velocities;
  std::vector<double> phases;
  std::vector<double> ratios;
};

/// Velocities must be nonzero.
PhaseFit fit_phase_linearity(double omega, double k, const std::vector<double>& velocities,
                             const PropagatorOptions& options = {}, int threads = 0);

// ---- protocol runners ------------------------------------------------------

struct ProtocolOutcome {
  double ground_population = 0.0;
  double ground_phase = 0.0;  // principal branch
  double r3_leak = 0.0;       // gap protocol only
  double rydberg_time = 0.0;  // us
  double duration = 0.0;      // us
  TrajectoryResult trajectory;

  double error() const { return 1.0 - ground_population; }
};

/// Dual-rail pi pulse at omega followed by a 3 pi pulse at omega_dp (signed).
ProtocolOutcome run_excite_restore(const SimulationParams& p, double k, const PropagatorOptions& options = {});

/// Dual-rail pi pulse, infrared 4 n pi wait, 3 pi deexcitation in the
/// {1, r1, r2, r3} model. Requires t_wait = 4 n pi / (sqrt2 Omega_IF).
ProtocolOutcome run_gap_protocol(const SimulationParams& p, const WavevectorSet& wavevectors,
                                 const PropagatorOptions& options = {});

/// Single-rail pi pulse at omega, idle wait t_wait, second pi pulse.
ProtocolOutcome run_traditional_restore(const SimulationParams& p, double k, const PropagatorOptions& options = {});

/// Stage lists used by the runners (exposed for export and testing).
std::vector<ScheduledStage> restore_schedule(const SimulationParams& p, double k);
std::vector<DriveStage> gap_stages(const SimulationParams& p);
std::vector<ScheduledStage> traditional_schedule(const SimulationParams& p, double k);

// ---- optimizer -------------------------------------------------------------

struct DeexcitationOptimum {
  double omega_dp = 0.0;           // signed, rad/us
  double error = 0.0;              // ground-population error at the optimum
  double error_at_omega = 0.0;     // error with |Omega_dp| = Omega, same sign
  int evaluations = 0;
};

/// Minimizes the restore error at v_ref over |Omega_dp| in
/// Omega [1 - bracket, 1 + bracket]. Throws OptimizationError when the minimum
/// sits on the bracket edge.
DeexcitationOptimum optimize_deexcitation(double omega, double k, double v_ref_mps, int sign, double bracket = 0.1,
                                          const PropagatorOptions& options = {});

// ---- velocity averaging ----------------------------------------------------

using VelocityRunner = std::function<ProtocolOutcome(double v_mps)>;

struct VelocityPoint {
  double v_mps = 0.0;
  double weight = 0.0;
  ProtocolOutcome outcome;
};

struct AveragedOutcome {
  double mean_population = 0.0;
  double mean_abs_phase = 0.0;
  double mean_r3_leak = 0.0;
  double mean_rydberg_time = 0.0;
  double weight_mass = 0.0;
  double max_phase_offset_from_pi = 0.0;  // max | |phase| - pi | over the grid
  std::vector<VelocityPoint> points;

  double mean_error() const { return 1.0 - mean_population; }
};

/// Weighted mean over `grid`. Throws ConvergenceError when the grid captures
/// less than 0.999 of the Maxwell density.
AveragedOutcome maxwell_average(const VelocityRunner& runner, const VelocityGrid& grid, int threads = 0);

inline constexpr double kMinWeightMass = 0.999;

// ---- export ----------------------------------------------------------------

struct SweepRow {
  double v_mps = 0.0;
  double z0_um = 0.0;
  double pop_error = 0.0;
  double phase_rad = 0.0;
  double r3_leak = 0.0;
  double rydberg_time_us = 0.0;
};

/// Columns v_mps, z0_um, pop_error, phase_rad, r3_leak, rydberg_time_us.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace dualrail
