#include "dualrail/atom.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "dualrail/errors.hpp"
#include "dualrail/units.hpp"

namespace dualrail {

void AtomSpecies::validate() const {
  if (!(mass_kg > 0.0)) throw DomainError(fmt::format("species {}: mass must be positive", name));
  if (!(rydberg_lifetime_us > 0.0)) {
    throw DomainError(fmt::format("species {}: Rydberg lifetime must be positive", name));
  }
}

double WavevectorSet::mismatch() const { return std::abs(1.0 - k_wait / k_excite); }

WavevectorSet LaserGeometry::wavevectors(std::string label) const {
  if (!(lambda_lower_nm > 0.0) || !(lambda_upper_nm > 0.0) || !(lambda_ir_nm > 0.0)) {
    throw DomainError("laser wavelengths must be positive");
  }
  const double lower = units::wavenumber_from_nm(lambda_lower_nm);
  const double upper = units::wavenumber_from_nm(lambda_upper_nm);
  WavevectorSet set;
  set.k_excite = excite_counterpropagating ? std::abs(upper - lower) : upper + lower;
  set.k_wait = ir_counterpropagating ? 2.0 * units::wavenumber_from_nm(lambda_ir_nm) : 0.0;
  set.label = std::move(label);
  return set;
}

InteractionTable::InteractionTable(std::map<LevelPair, double> c6_thz_um6, double separation_um) {
  for (const auto& [pair, value] : c6_thz_um6) set_c6(pair.first, pair.second, value);
  set_separation_um(separation_um);
}

LevelPair InteractionTable::key(int n1, int n2) { return n1 <= n2 ? LevelPair{n1, n2} : LevelPair{n2, n1}; }

void InteractionTable::set_c6(int n1, int n2, double c6_thz_um6) { c6_[key(n1, n2)] = c6_thz_um6; }

bool InteractionTable::contains(int n1, int n2) const { return c6_.contains(key(n1, n2)); }

double InteractionTable::c6(int n1, int n2) const {
  const auto it = c6_.find(key(n1, n2));
  if (it == c6_.end()) throw LookupError(fmt::format("no C6 entry for pair ({}, {})", n1, n2));
  return it->second;
}

void InteractionTable::set_separation_um(double l) {
  if (!(l > 0.0)) throw DomainError("atom separation L must be positive");
  separation_um_ = l;
}

double InteractionTable::shift(int n1, int n2) const {
  if (!(separation_um_ > 0.0)) throw DomainError("atom separation L must be positive");
  return units::c6_shift_rad_per_us(c6(n1, n2), separation_um_);
}

double InteractionShifts::between(int a, int b) const {
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  if (lo == 1 && hi == 1) return v11;
  if (lo == 1 && hi == 2) return v12;
  if (lo == 1 && hi == 3) return v13;
  if (lo == 2 && hi == 2) return v22;
  if (lo == 2 && hi == 3) return v23;
  throw LookupError(fmt::format("no interaction shift between levels r{} and r{}", a, b));
}

InteractionShifts interaction_shifts(const InteractionTable& table, const RydbergLevels& levels) {
  InteractionShifts v;
  v.v11 = table.shift(levels.r1, levels.r1);
  v.v12 = table.shift(levels.r1, levels.r2);
  v.v13 = table.shift(levels.r1, levels.r3);
  v.v22 = table.shift(levels.r2, levels.r2);
  v.v23 = table.shift(levels.r2, levels.r3);
  return v;
}

double SimulationParams::gap_wait_time(int n_cycles, double omega_if) {
  if (n_cycles < 0) throw DomainError("number of gap cycles must be non-negative");
  if (n_cycles > 0 && !(std::abs(omega_if) > 0.0)) throw DomainError("infrared Rabi frequency must be nonzero");
  if (n_cycles == 0) return 0.0;
  return 4.0 * n_cycles * units::kPi / (std::numbers::sqrt2 * std::abs(omega_if));
}

void SimulationParams::set_gap_cycles(int n) {
  n_gap_cycles = n;
  t_wait_us = gap_wait_time(n, omega_if);
}

void SimulationParams::validate(bool gap_protocol) const {
  if (!std::isfinite(omega) || !std::isfinite(omega_dp) || !std::isfinite(omega_if) ||
      !std::isfinite(omega_t) || !std::isfinite(z0_um) || !std::isfinite(v_mps) ||
      !std::isfinite(t_wait_us) || !std::isfinite(temperature_uk)) {
    throw DomainError("simulation parameters must be finite");
  }
  if (t_wait_us < 0.0) throw DomainError("wait time must be non-negative");
  if (temperature_uk < 0.0) throw DomainError("temperature must be non-negative");
  if (n_gap_cycles < 0) throw DomainError("number of gap cycles must be non-negative");
  if (gap_protocol) {
    if (!(omega > 0.0)) throw DomainError("excitation Rabi frequency must be positive");
    if (omega_dp == 0.0) throw DomainError("deexcitation Rabi frequency must be nonzero");
    if (n_gap_cycles > 0) {
      if (!(omega_if > 0.0)) throw DomainError("infrared Rabi frequency must be positive");
      const double expected = gap_wait_time(n_gap_cycles, omega_if);
      if (std::abs(t_wait_us - expected) > 1e-12 * expected) {
        throw DomainError(fmt::format("gap wait time {} us does not equal 4 n pi/(sqrt2 Omega_IF) = {} us",
                                      t_wait_us, expected));
      }
    } else if (t_wait_us != 0.0) {
      throw DomainError("a nonzero wait time needs at least one infrared cycle");
    }
  }
}

}  // namespace dualrail
