#pragma once

#include <Eigen/Dense>

#include <vector>

#include "dualrail/propagator.hpp"

namespace dualrail {

struct StageRun {
  Eigen::VectorXcd y;
  double rydberg_time = 0.0;
  long steps = 0;
  long rejected_steps = 0;
  long evaluations = 0;
};

/// Integrates one stage. Appends a Sample for each entry of `sample_times`
/// (ascending, inside (t0, t1]) when `samples` is non-null.
StageRun integrate_stage(const Hamiltonian& h, const Eigen::VectorXcd& y0, double t0, double t1,
                         const PropagatorOptions& options, const std::vector<double>& sample_times,
                         std::vector<Sample>* samples);

}  // namespace dualrail
