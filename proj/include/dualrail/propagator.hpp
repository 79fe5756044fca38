#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "dualrail/hamiltonian.hpp"
#include "dualrail/state.hpp"

namespace dualrail {

enum class Solver {
  dop853,             // adaptive 8th-order Runge-Kutta on the Schroedinger equation
  frame_exponential,  // exact exponential in the co-moving frame (stages with a DopplerFrame)
};

struct PropagatorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  Solver solver = Solver::dop853;
  int samples_per_stage = 1000;  // 0 disables trajectory sampling
  long max_steps = 20'000'000;   // per stage
};

/// Time-ordered evolution from t0 to t1. The frame solver falls back to
/// dop853 when `h` has no frame. Throws IntegrationError on step underflow
/// or when max_steps is exceeded.
ComplexState evolve(const ComplexState& state, const Hamiltonian& h, double t0, double t1,
                    const PropagatorOptions& options = {});

/// Product of `n_steps` midpoint matrix exponentials. Independent of the
/// Runge-Kutta code; used as a verification oracle.
ComplexState evolve_oracle(const ComplexState& state, const Hamiltonian& h, double t0, double t1, int n_steps);

struct ScheduledStage {
  std::string label;
  double duration = 0.0;  // us
  Hamiltonian hamiltonian;  // evaluated at absolute time
};

struct Sample {
  double t = 0.0;
  Eigen::VectorXcd amplitudes;
};

struct TrajectoryResult {
  ComplexState final_state;
  std::vector<Sample> samples;                 // t = 0 first, then samples_per_stage per stage
  std::vector<ComplexState> stage_end_states;  // one per stage
  std::vector<double> stage_end_times;
  double rydberg_time = 0.0;  // us, integral of the single-Rydberg population
  long steps = 0;
  long rejected_steps = 0;
  long evaluations = 0;

  double start_time = 0.0;

  double duration() const { return stage_end_times.empty() ? 0.0 : stage_end_times.back() - start_time; }
};

/// Runs contiguous stages from t_start (default 0). Each Hamiltonian sees
/// absolute time, so z0 + v t continues across stage boundaries. Boundaries
/// are exact break points for the stepper.
TrajectoryResult run_schedule(const ComplexState& initial, const std::vector<ScheduledStage>& stages,
                              const PropagatorOptions& options = {}, double t_start = 0.0);

/// run_schedule for {1, r1, r2, r3} drive stages.
TrajectoryResult run_sequence(const ComplexState& initial, const std::vector<DriveStage>& stages,
                              const WavevectorSet& wavevectors, Motion motion, const PropagatorOptions& options = {});

/// Principal-branch phase in (-pi, pi].
double principal_phase(cplx z);

/// CSV with columns t_us, pop_<level>..., phase_<level>...; 12 significant digits.
void write_trajectory_csv(std::ostream& out, const LevelBasis& basis, const std::vector<Sample>& samples);

}  // namespace dualrail
