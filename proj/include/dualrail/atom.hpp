#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dualrail {

namespace constants {
inline constexpr double kBoltzmann = 1.38065e-23;  // J/K
inline constexpr double kRb87Mass = 1.44316e-25;   // kg
inline constexpr double kCs133Mass = 2.20695e-25;  // kg
}  // namespace constants

struct AtomSpecies {
  std::string name;
  double mass_kg = 0.0;
  double rydberg_lifetime_us = 0.0;

  /// Throws DomainError unless mass and lifetime are positive.
  void validate() const;
};

/// Effective wavevectors of the optical (ground-Rydberg) and infrared
/// (Rydberg-Rydberg) two-photon drives, both in rad/um.
struct WavevectorSet {
  double k_excite = 0.0;
  double k_wait = 0.0;
  std::string label;

  /// |1 - k_wait/k_excite|.
  double mismatch() const;
};

/// Laser geometry from which a WavevectorSet is derived. Wavelengths in nm.
struct LaserGeometry {
  double lambda_lower_nm = 0.0;  // ground -> intermediate
  double lambda_upper_nm = 0.0;  // intermediate -> Rydberg
  bool excite_counterpropagating = true;
  double lambda_ir_nm = 0.0;  // effective wavelength of each infrared leg
  bool ir_counterpropagating = true;

  /// k = 2pi(1/lower +- 1/upper); k_w = 4pi/lambda_ir for a counterpropagating
  /// infrared pair, zero for a copropagating one.
  WavevectorSet wavevectors(std::string label) const;
};

/// Unordered pair of principal quantum numbers.
using LevelPair = std::pair<int, int>;

class InteractionTable {
 public:
  InteractionTable() = default;
  InteractionTable(std::map<LevelPair, double> c6_thz_um6, double separation_um);

  void set_c6(int n1, int n2, double c6_thz_um6);
  double c6(int n1, int n2) const;  // THz um^6, throws LookupError
  bool contains(int n1, int n2) const;

  double separation_um() const { return separation_um_; }
  void set_separation_um(double l);

  /// Shift C6/L^6 converted to rad/us (C6 read as an ordinary frequency).
  double shift(int n1, int n2) const;

  const std::map<LevelPair, double>& entries() const { return c6_; }

 private:
  static LevelPair key(int n1, int n2);
  std::map<LevelPair, double> c6_;
  double separation_um_ = 0.0;
};

/// Principal quantum numbers assigned to |r1>, |r2>, |r3>.
struct RydbergLevels {
  int r1 = 0;
  int r2 = 0;
  int r3 = 0;
};

/// Interaction shifts for the Rydberg pairs that appear in the two-atom gate,
/// keyed by level index (1,2,3) rather than principal quantum number.
struct InteractionShifts {
  double v11 = 0.0;
  double v12 = 0.0;
  double v13 = 0.0;
  double v22 = 0.0;
  double v23 = 0.0;

  /// Shift for control level a and target level b, a in {1,2,3}, b in {1,2}.
  double between(int a, int b) const;
};

/// Throws LookupError if a needed pair is missing, DomainError if L <= 0.
InteractionShifts interaction_shifts(const InteractionTable& table, const RydbergLevels& levels);

struct AtomLaserConfig {
  std::string name;
  AtomSpecies species;
  LaserGeometry geometry;
  WavevectorSet wavevectors;
  RydbergLevels levels;
  InteractionTable interactions;
};

/// Free parameters of a single-atom or gate run. Angular frequencies in rad/us.
struct SimulationParams {
  double omega = 0.0;     // excitation Rabi frequency
  double omega_dp = 0.0;  // deexcitation Rabi frequency (signed)
  double omega_if = 0.0;  // infrared Rabi frequency
  double omega_t = 0.0;   // target-qubit Rabi frequency
  double z0_um = 0.0;
  double v_mps = 0.0;
  double t_wait_us = 0.0;
  int n_gap_cycles = 0;
  double temperature_uk = 0.0;

  /// 4 n pi / (sqrt2 Omega_IF).
  static double gap_wait_time(int n_cycles, double omega_if);

  /// Sets n_gap_cycles and the matching t_wait.
  void set_gap_cycles(int n);

  /// Throws DomainError when an invariant is violated. The gap flag requires
  /// t_wait = 4 n pi/(sqrt2 Omega_IF).
  void validate(bool gap_protocol) const;
};

}  // namespace dualrail
