#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "dualrail/atom.hpp"

namespace dualrail {

inline constexpr std::string_view kDefaultPreset = "rb87-5p12";

/// Built-in atom/laser configurations. Wavevectors are derived from the stored
/// wavelengths, never stored directly.
const std::vector<AtomLaserConfig>& builtin_configs();

/// Throws LookupError for an unknown name.
const AtomLaserConfig& builtin_config(std::string_view name);

/// Reads presets from an INI file, one section per preset. Keys:
///   species, mass_kg, tau_us, lambda_lower_nm, lambda_upper_nm,
///   excite_counterpropagating, lambda_ir_nm, ir_counterpropagating,
///   n_r1, n_r2, n_r3, c6_thz_um6, L_um
/// `c6_thz_um6` is a comma-separated list of `n1:n2=value` entries.
/// Throws ConfigError on malformed input.
std::vector<AtomLaserConfig> load_presets(const std::filesystem::path& path);

/// Parses preset text in the same format (used by load_presets).
std::vector<AtomLaserConfig> parse_presets(std::string_view text);

/// Serializes presets so that parse_presets(format_presets(x)) reproduces x.
std::string format_presets(const std::vector<AtomLaserConfig>& configs);

}  // namespace dualrail
