#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dualrail/atom.hpp"
#include "dualrail/gate.hpp"
#include "dualrail/presets.hpp"
#include "dualrail/propagator.hpp"

namespace dualrail::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Environment variable naming a preset INI file loaded when --config is absent.
inline constexpr const char* kConfigEnv = "DUALRAIL_CONFIG";

enum class OutputFormat { csv, json };

/// Parsed command line. Frequencies are ordinary frequencies in MHz here and
/// are converted to rad/us when parameters are built.
struct RunConfig {
  std::string subcommand;
  std::string preset{kDefaultPreset};
  std::string config_path;  // empty: fall back to $DUALRAIL_CONFIG, then built-ins

  std::optional<double> omega_mhz;
  std::optional<double> omega_dp_mhz;
  std::optional<double> omega_if_mhz;
  std::optional<double> omega_t_mhz;
  double v_mps = 0.0;                     // control qubit for `gate`
  std::optional<double> v_target_mps;     // `gate` only; defaults to v_mps
  double z0_um = 0.0;
  std::optional<double> t_us;
  std::optional<double> t_wait_us;
  int n_cycles = 1;
  std::optional<double> temp_uk;
  int grid_points = 0;  // 0: command default
  std::optional<double> L_um;

  std::string out_path;
  OutputFormat format = OutputFormat::csv;
  int threads = 0;
  std::string solver = "auto";  // auto, dop853, frame
};

/// Preset chosen by `config`: the named entry of the config file when one is
/// given (flag or environment), else the built-in of that name, with the
/// separation overridden by --L. Throws ConfigError or LookupError.
AtomLaserConfig resolve_preset(const RunConfig& config);

/// Propagator options for the requested solver. `auto` picks the frame solver
/// when `prefer_frame` is set.
PropagatorOptions solver_options(const RunConfig& config, bool prefer_frame);

/// Single-atom parameters with command-specific defaults already applied.
/// Throws DomainError when an override violates the parameter invariants.
SimulationParams restore_params(const RunConfig& config);
SimulationParams gap_params(const RunConfig& config);
SimulationParams traditional_params(const RunConfig& config);

/// Gate parameters from the preset: reference gate-table values unless overridden.
GateParams gate_params(const RunConfig& config, const AtomLaserConfig& preset);

/// Runs the command line. Summaries go to `out`, diagnostics to `err`.
/// Returns 0 on success, 2 on usage or configuration errors, 3 on numerical
/// failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualrail::cli
