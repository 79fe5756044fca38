#include "dualrail/hamiltonian.hpp"

#include <cmath>

#include "dualrail/errors.hpp"

namespace dualrail {

namespace {

cplx unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

DopplerFrame make_frame(Eigen::MatrixXcd h_static, const Eigen::VectorXd& wavenumbers, Motion m) {
  return DopplerFrame{std::move(h_static), wavenumbers * m.z0_um, wavenumbers * m.v_mps};
}

}  // namespace

Eigen::MatrixXcd Hamiltonian::at(double t) const {
  Eigen::MatrixXcd h(dim(), dim());
  fill(t, h);
  return h;
}

const LevelBasis& single_rail_basis() {
  static const LevelBasis basis({"1", "r1"}, {false, true});
  return basis;
}

const LevelBasis& dual_rail_basis() {
  static const LevelBasis basis({"r2", "r1", "1"}, {true, true, false});
  return basis;
}

const LevelBasis& gap_basis() {
  static const LevelBasis basis({"1", "r1", "r2", "r3"}, {false, true, true, true});
  return basis;
}

const LevelBasis& gate_nine_basis() {
  static const LevelBasis basis({"r3r2", "r3r1", "r31", "r2r2", "r2r1", "r21", "r1r2", "r1r1", "r11"},
                                {false, false, true, false, false, true, false, false, true});
  return basis;
}

Hamiltonian h_zero(const LevelBasis& basis) {
  const int n = basis.size();
  return Hamiltonian{basis, [](double, Eigen::MatrixXcd& h) { h.setZero(); },
                     DopplerFrame{Eigen::MatrixXcd::Zero(n, n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)}};
}

Hamiltonian h_single_rail(double omega, double k, Motion m) {
  const double half = omega / 2.0;
  Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(2, 2);
  hs(1, 0) = hs(0, 1) = half;
  return Hamiltonian{single_rail_basis(),
                     [=](double t, Eigen::MatrixXcd& h) {
                       h.setZero();
                       const cplx p = half * unit_phase(k * m.z(t));
                       h(1, 0) = p;
                       h(0, 1) = std::conj(p);
                     },
                     make_frame(hs, Eigen::Vector2d(0.0, k), m)};
}

Hamiltonian h_dual_rail(double omega, double k, Motion m) {
  const double half = omega / 2.0;
  Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(3, 3);
  hs(0, 2) = hs(2, 0) = hs(1, 2) = hs(2, 1) = half;
  return Hamiltonian{dual_rail_basis(),
                     [=](double t, Eigen::MatrixXcd& h) {
                       h.setZero();
                       const cplx p = half * unit_phase(k * m.z(t));
                       h(1, 2) = p;
                       h(2, 1) = std::conj(p);
                       h(0, 2) = std::conj(p);
                       h(2, 0) = p;
                     },
                     make_frame(hs, Eigen::Vector3d(-k, k, 0.0), m)};
}

Hamiltonian h_four_field(double omega, double k, Motion m) {
  return Hamiltonian{dual_rail_basis(),
                     [=](double t, Eigen::MatrixXcd& h) {
                       h.setZero();
                       const double phase = k * m.z(t);
                       h(1, 2) = h(2, 1) = omega * std::cos(phase);
                       h(0, 2) = cplx(0.0, omega * std::sin(phase));
                       h(2, 0) = std::conj(h(0, 2));
                     },
                     std::nullopt};
}

Eigen::Matrix3cd four_field_rotation() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3cd r;
  r << -s, s, 0.0,  //
      s, s, 0.0,    //
      0.0, 0.0, 1.0;
  return r;
}

const char* to_string(StageKind kind) {
  switch (kind) {
    case StageKind::excite: return "excite";
    case StageKind::wait_with_infrared: return "wait_with_infrared";
    case StageKind::wait_idle: return "wait_idle";
    case StageKind::deexcite: return "deexcite";
  }
  return "unknown";
}

void DriveStage::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw DomainError("stage duration must be positive");
  if (!std::isfinite(omega)) throw DomainError("stage Rabi amplitude must be finite");
  if (kind == StageKind::wait_idle && omega != 0.0) throw DomainError("idle stage cannot carry a Rabi amplitude");
}

Hamiltonian h_gap_four_level(const DriveStage& stage, const WavevectorSet& wavevectors, Motion m) {
  const double half = stage.omega / 2.0;
  Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(4, 4);
  switch (stage.kind) {
    case StageKind::excite:
    case StageKind::deexcite: {
      const double k = wavevectors.k_excite;
      hs(1, 0) = hs(0, 1) = hs(2, 0) = hs(0, 2) = half;
      return Hamiltonian{gap_basis(),
                         [=](double t, Eigen::MatrixXcd& h) {
                           h.setZero();
                           const cplx p = half * unit_phase(k * m.z(t));
                           h(1, 0) = p;
                           h(0, 1) = std::conj(p);
                           h(2, 0) = std::conj(p);
                           h(0, 2) = p;
                         },
                         make_frame(hs, Eigen::Vector4d(0.0, k, -k, 0.0), m)};
    }
    case StageKind::wait_with_infrared: {
      const double kw = wavevectors.k_wait;
      hs(1, 3) = hs(3, 1) = hs(2, 3) = hs(3, 2) = half;
      return Hamiltonian{gap_basis(),
                         [=](double t, Eigen::MatrixXcd& h) {
                           h.setZero();
                           const cplx p = half * unit_phase(kw * m.z(t));
                           h(1, 3) = p;
                           h(3, 1) = std::conj(p);
                           h(2, 3) = std::conj(p);
                           h(3, 2) = p;
                         },
                         make_frame(hs, Eigen::Vector4d(0.0, kw, -kw, 0.0), m)};
    }
    case StageKind::wait_idle:
      return h_zero(gap_basis());
  }
  throw DomainError("unknown stage kind");
}

Hamiltonian h_control_infrared(double omega_if, double k_w, Motion m) {
  static const LevelBasis basis({"r3", "r2", "r1"}, {true, true, true});
  const double half = omega_if / 2.0;
  Eigen::MatrixXcd hs = Eigen::MatrixXcd::Zero(3, 3);
  hs(2, 0) = hs(0, 2) = hs(1, 0) = hs(0, 1) = half;
  return Hamiltonian{basis,
                     [=](double t, Eigen::MatrixXcd& h) {
                       h.setZero();
                       const cplx p = half * unit_phase(k_w * m.z(t));
                       h(2, 0) = p;
                       h(0, 2) = std::conj(p);
                       h(1, 0) = std::conj(p);
                       h(0, 1) = p;
                     },
                     make_frame(hs, Eigen::Vector3d(0.0, -k_w, k_w), m)};
}

namespace {

auto gate_nine_fill(double omega_t, double omega_if, double k, double k_w, Motion control, Motion target,
                    const InteractionShifts& v) {
  return [=](double t, Eigen::MatrixXcd& h) {
    const cplx tp = omega_t / 2.0 * unit_phase(k * target.z(t));
    const cplx tm = std::conj(tp);
    const cplx wp = omega_if / 2.0 * unit_phase(k_w * control.z(t));
    const cplx wm = std::conj(wp);
    const cplx o = 0.0;
    // clang-format off
    h << v.v23, o,     tm,    wp,    o,     o,     wm,    o,     o,
         o,     v.v13, tp,    o,     wp,    o,     o,     wm,    o,
         tp,    tm,    o,     o,     o,     wp,    o,     o,     wm,
         wm,    o,     o,     v.v22, o,     tm,    o,     o,     o,
         o,     wm,    o,     o,     v.v12, tp,    o,     o,     o,
         o,     o,     wm,    tp,    tm,    o,     o,     o,     o,
         wp,    o,     o,     o,     o,     o,     v.v12, o,     tm,
         o,     wp,    o,     o,     o,     o,     o,     v.v11, tp,
         o,     o,     wp,    o,     o,     o,     tp,    tm,    o;
    // clang-format on
  };
}

}  // namespace

Hamiltonian h_gate_nine(double omega_t, double omega_if, double k, double k_w, Motion control, Motion target,
                        const InteractionShifts& v) {
  Hamiltonian h{gate_nine_basis(), gate_nine_fill(omega_t, omega_if, k, k_w, control, target, v), std::nullopt};
  // Frame phases are sums of the control {r3, r2, r1} and target {r2, r1, 1}
  // phases; the drives are constant once both are removed.
  const Eigen::Vector3d kc(0.0, -k_w, k_w);
  const Eigen::Vector3d kt(-k, k, 0.0);
  Eigen::VectorXd phase0(9);
  Eigen::VectorXd rate(9);
  for (int c = 0; c < 3; ++c) {
    for (int j = 0; j < 3; ++j) {
      phase0(3 * c + j) = kc(c) * control.z0_um + kt(j) * target.z0_um;
      rate(3 * c + j) = kc(c) * control.v_mps + kt(j) * target.v_mps;
    }
  }
  Eigen::MatrixXcd hs(9, 9);
  gate_nine_fill(omega_t, omega_if, 0.0, 0.0, Motion{}, Motion{}, v)(0.0, hs);
  h.frame = DopplerFrame{std::move(hs), std::move(phase0), std::move(rate)};
  return h;
}

Hamiltonian h_two_atom(const Hamiltonian& control, const Hamiltonian& target, const Eigen::VectorXd& shifts,
                       std::vector<bool> rydberg) {
  const int dc = control.dim();
  const int dt = target.dim();
  const int n = dc * dt;
  if (shifts.size() != n) throw DomainError("two-atom shift vector has the wrong size");
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (const auto& a : control.basis.labels()) {
    for (const auto& b : target.basis.labels()) labels.push_back(a + b);
  }
  LevelBasis basis(std::move(labels), std::move(rydberg));

  auto kron_sum = [dc, dt, shifts](const Eigen::MatrixXcd& hc, const Eigen::MatrixXcd& ht, Eigen::MatrixXcd& h) {
    h.setZero();
    for (int c = 0; c < dc; ++c) {
      for (int c2 = 0; c2 < dc; ++c2) {
        if (hc(c, c2) == cplx(0.0)) continue;
        for (int j = 0; j < dt; ++j) h(c * dt + j, c2 * dt + j) += hc(c, c2);
      }
    }
    for (int c = 0; c < dc; ++c) {
      h.block(c * dt, c * dt, dt, dt) += ht;
    }
    h.diagonal() += shifts.cast<cplx>();
  };

  Hamiltonian h{std::move(basis),
                [cf = control.fill, tf = target.fill, dc, dt, kron_sum](double t, Eigen::MatrixXcd& out) {
                  Eigen::MatrixXcd hc(dc, dc);
                  Eigen::MatrixXcd ht(dt, dt);
                  cf(t, hc);
                  tf(t, ht);
                  kron_sum(hc, ht, out);
                },
                std::nullopt};
  if (control.frame && target.frame) {
    Eigen::VectorXd phase0(n);
    Eigen::VectorXd rate(n);
    for (int c = 0; c < dc; ++c) {
      for (int j = 0; j < dt; ++j) {
        phase0(c * dt + j) = control.frame->phase0(c) + target.frame->phase0(j);
        rate(c * dt + j) = control.frame->rate(c) + target.frame->rate(j);
      }
    }
    Eigen::MatrixXcd hs(n, n);
    kron_sum(control.frame->h_static, target.frame->h_static, hs);
    h.frame = DopplerFrame{std::move(hs), std::move(phase0), std::move(rate)};
  }
  return h;
}

Eigen::VectorXd twelve_level_shifts(const InteractionShifts& v) {
  Eigen::VectorXd shifts = Eigen::VectorXd::Zero(12);
  // target index 0 is r2, 1 is r1, 2 is the ground level
  for (int c = 1; c < 4; ++c) {
    shifts(c * 3 + 0) = v.between(c, 2);
    shifts(c * 3 + 1) = v.between(c, 1);
  }
  return shifts;
}

std::vector<bool> twelve_level_rydberg_mask() {
  std::vector<bool> mask(12, false);
  for (int c = 0; c < 4; ++c) {
    for (int t = 0; t < 3; ++t) mask[static_cast<std::size_t>(c * 3 + t)] = (c > 0) != (t < 2);
  }
  return mask;
}

}  // namespace dualrail
