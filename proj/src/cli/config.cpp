#include <cmath>
#include <cstdlib>
#include <numbers>

#include <fmt/format.h>

#include "dualrail/cli.hpp"
#include "dualrail/errors.hpp"
#include "dualrail/units.hpp"

namespace dualrail::cli {

namespace {

using units::mhz_to_rad_per_us;

// Operating point of both results tables.
constexpr double kOmegaMhz = 2.0;
constexpr double kOmegaDpGapMhz = -2.0339;
constexpr double kOmegaDpRestoreMhz = -2.0399;

std::string config_file(const RunConfig& config) {
  if (!config.config_path.empty()) return config.config_path;
  if (const char* env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') return env;
  return {};
}

}  // namespace

AtomLaserConfig resolve_preset(const RunConfig& config) {
  AtomLaserConfig preset;
  bool found = false;
  if (const auto path = config_file(config); !path.empty()) {
    for (auto& entry : load_presets(path)) {
      if (entry.name == config.preset) {
        preset = std::move(entry);
        found = true;
        break;
      }
    }
  }
  if (!found) preset = builtin_config(config.preset);
  if (config.L_um) preset.interactions.set_separation_um(*config.L_um);
  return preset;
}

PropagatorOptions solver_options(const RunConfig& config, bool prefer_frame) {
  PropagatorOptions options;
  options.samples_per_stage = 0;
  if (config.solver == "dop853") {
    options.solver = Solver::dop853;
  } else if (config.solver == "frame") {
    options.solver = Solver::frame_exponential;
  } else if (config.solver == "auto") {
    options.solver = prefer_frame ? Solver::frame_exponential : Solver::dop853;
  } else {
    throw ConfigError(fmt::format("unknown solver '{}'", config.solver));
  }
  return options;
}

SimulationParams restore_params(const RunConfig& config) {
  SimulationParams p;
  p.omega = mhz_to_rad_per_us(config.omega_mhz.value_or(kOmegaMhz));
  p.omega_dp = mhz_to_rad_per_us(config.omega_dp_mhz.value_or(kOmegaDpRestoreMhz));
  p.v_mps = config.v_mps;
  p.z0_um = config.z0_um;
  p.temperature_uk = config.temp_uk.value_or(0.0);
  p.validate(true);
  return p;
}

SimulationParams gap_params(const RunConfig& config) {
  SimulationParams p;
  p.omega = mhz_to_rad_per_us(config.omega_mhz.value_or(kOmegaMhz));
  p.omega_dp = mhz_to_rad_per_us(config.omega_dp_mhz.value_or(kOmegaDpGapMhz));
  p.omega_if = config.omega_if_mhz ? mhz_to_rad_per_us(*config.omega_if_mhz) : p.omega;
  p.v_mps = config.v_mps;
  p.z0_um = config.z0_um;
  p.temperature_uk = config.temp_uk.value_or(0.0);
  if (config.n_cycles < 1) throw DomainError("--n-cycles must be at least 1 for the gap protocol");
  p.set_gap_cycles(config.n_cycles);
  if (config.t_wait_us) p.t_wait_us = *config.t_wait_us;
  p.validate(true);
  return p;
}

SimulationParams traditional_params(const RunConfig& config) {
  SimulationParams p;
  // Same wait as the gap protocol; pulses at sqrt2 times the dual-rail Omega.
  const double omega = mhz_to_rad_per_us(config.omega_mhz.value_or(kOmegaMhz * std::numbers::sqrt2));
  p.omega = omega;
  p.omega_dp = omega;
  p.v_mps = config.v_mps;
  p.z0_um = config.z0_um;
  p.temperature_uk = config.temp_uk.value_or(0.0);
  const double omega_if = mhz_to_rad_per_us(config.omega_if_mhz.value_or(kOmegaMhz));
  if (config.n_cycles < 0) throw DomainError("--n-cycles must be non-negative");
  p.t_wait_us = config.t_wait_us.value_or(SimulationParams::gap_wait_time(config.n_cycles, omega_if));
  p.validate(false);
  if (!(p.omega > 0.0)) throw DomainError("Rabi frequency must be positive");
  return p;
}

GateParams gate_params(const RunConfig& config, const AtomLaserConfig& preset) {
  GateParams p;
  p.omega = mhz_to_rad_per_us(config.omega_mhz.value_or(kOmegaMhz));
  p.omega_dp = mhz_to_rad_per_us(config.omega_dp_mhz.value_or(kOmegaDpGapMhz));
  p.omega_t = config.omega_t_mhz ? mhz_to_rad_per_us(*config.omega_t_mhz) : p.omega;
  p.omega_if = config.omega_if_mhz ? mhz_to_rad_per_us(*config.omega_if_mhz) : p.omega;
  p.n_gap_cycles = config.n_cycles;
  p.control = {config.z0_um, config.v_mps};
  p.target = {config.z0_um, config.v_target_mps.value_or(config.v_mps)};
  p.shifts = interaction_shifts(preset.interactions, preset.levels);
  p.wavevectors = preset.wavevectors;
  p.tau_us = preset.species.rydberg_lifetime_us;
  if (config.t_wait_us) {
    throw ConfigError("the gate wait time follows from --n-cycles and --omega-if-mhz; --t-wait is not accepted");
  }
  return p;
}

}  // namespace dualrail::cli
