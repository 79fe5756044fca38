#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

#include "dualrail/atom.hpp"
#include "dualrail/state.hpp"

namespace dualrail {

/// Straight-line motion along z: z(t) = z0 + v t (um, m/s == um/us).
struct Motion {
  double z0_um = 0.0;
  double v_mps = 0.0;

  double z(double t_us) const { return z0_um + v_mps * t_us; }
};

/// H(t) = F(t) H_static F(t)^dagger with F = diag(exp(i theta_j(t))) and
/// theta_j(t) = phase0_j + rate_j t. In the frame the dynamics are generated by
/// the constant matrix H_static + diag(rate).
struct DopplerFrame {
  Eigen::MatrixXcd h_static;
  Eigen::VectorXd phase0;
  Eigen::VectorXd rate;
};

/// Time-dependent Hermitian Hamiltonian over a fixed basis, in rad/us.
struct Hamiltonian {
  LevelBasis basis;
  /// Overwrites every entry of `h` (already sized dim x dim) with H(t).
  std::function<void(double t, Eigen::MatrixXcd& h)> fill;
  /// Present when the drive is stationary in a co-moving phase frame.
  std::optional<DopplerFrame> frame;

  int dim() const { return basis.size(); }
  Eigen::MatrixXcd at(double t) const;
};

// Bases. Order is part of the contract: matrix indices follow it.
const LevelBasis& single_rail_basis();  // {1, r1}
const LevelBasis& dual_rail_basis();    // {r2, r1, 1}
const LevelBasis& gap_basis();          // {1, r1, r2, r3}
const LevelBasis& gate_nine_basis();    // {r3r2, r3r1, r31, r2r2, r2r1, r21, r1r2, r1r1, r11}

/// Zero matrix on `basis` (identity evolution).
Hamiltonian h_zero(const LevelBasis& basis);

/// <r1|H|1> = (Omega/2) e^{ikz}.
Hamiltonian h_single_rail(double omega, double k, Motion m);

/// <r2|H|1> = (Omega/2) e^{-ikz}, <r1|H|1> = (Omega/2) e^{+ikz}.
Hamiltonian h_dual_rail(double omega, double k, Motion m);

/// <r1|H|1> = Omega cos kz, <r2|H|1> = i Omega sin kz.
Hamiltonian h_four_field(double omega, double k, Motion m);

/// Rotation R with R h_four_field(Omega) R^dagger = h_dual_rail(sqrt2 Omega)
/// in the {r2, r1, 1} basis.
Eigen::Matrix3cd four_field_rotation();

enum class StageKind { excite, wait_with_infrared, wait_idle, deexcite };

const char* to_string(StageKind kind);

/// One stage of a single-atom pulse sequence in the {1, r1, r2, r3} model.
struct DriveStage {
  StageKind kind = StageKind::wait_idle;
  double omega = 0.0;     // signed Rabi amplitude of the active coupling pair
  double duration = 0.0;  // us

  /// Throws DomainError for a non-positive duration or stray amplitude.
  void validate() const;
};

/// excite/deexcite: optical pair with +-k_excite; wait_with_infrared:
/// <r1|H|r3> = (Omega/2) e^{+ik_w z}, <r2|H|r3> = (Omega/2) e^{-ik_w z};
/// wait_idle: zero. Throws DomainError for an unknown kind.
Hamiltonian h_gap_four_level(const DriveStage& stage, const WavevectorSet& wavevectors, Motion m);

/// Infrared coupling on the control subspace {r3, r2, r1}.
Hamiltonian h_control_infrared(double omega_if, double k_w, Motion m);

/// Nine-level control/target Hamiltonian for the Rydberg sector of the
/// control atom. Diagonal carries the pair shifts; target couplings follow the
/// dual-rail signs and infrared couplings follow h_control_infrared.
Hamiltonian h_gate_nine(double omega_t, double omega_if, double k, double k_w, Motion control,
                        Motion target, const InteractionShifts& v);

/// Kronecker-sum Hamiltonian control (x) 1 + 1 (x) target + diag(shifts), with
/// product labels "<control><target>". `rydberg` flags the product levels
/// counted as single-Rydberg. A frame is attached when both factors have one.
Hamiltonian h_two_atom(const Hamiltonian& control, const Hamiltonian& target,
                       const Eigen::VectorXd& shifts, std::vector<bool> rydberg);

/// Pair-shift vector for control basis {1, r1, r2, r3} (gap_basis) and target
/// basis {r2, r1, 1} (dual_rail_basis), zero wherever either atom is in |1>.
Eigen::VectorXd twelve_level_shifts(const InteractionShifts& v);

/// Single-Rydberg mask for the same twelve-level product basis.
std::vector<bool> twelve_level_rydberg_mask();

}  // namespace dualrail
