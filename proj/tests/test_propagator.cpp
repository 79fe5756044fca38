#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "dualrail/errors.hpp"
#include "dualrail/hamiltonian.hpp"
#include "dualrail/presets.hpp"
#include "dualrail/propagator.hpp"
#include "dualrail/units.hpp"

using namespace dualrail;

namespace {

const cplx I{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);

double max_diff(const ComplexState& a, const ComplexState& b) {
  return (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff();
}

PropagatorOptions quiet(Solver s = Solver::dop853) {
  PropagatorOptions o;
  o.samples_per_stage = 0;
  o.solver = s;
  return o;
}

Hamiltonian negated(const Hamiltonian& h) {
  Hamiltonian out = h;
  out.fill = [f = h.fill](double t, Eigen::MatrixXcd& m) {
    f(t, m);
    m = -m;
  };
  out.frame.reset();
  return out;
}

double k_minus() { return builtin_config("rb87-5p12").wavevectors.k_excite; }

}  // namespace

TEST_SUITE("propagator") {
  TEST_CASE("constant dual-rail pi pulse empties the ground state") {
    const double omega = units::mhz_to_rad_per_us(2.0);
    const auto h = h_dual_rail(omega, k_minus(), {0.0, 0.0});
    const auto s0 = ComplexState::basis_state(h.basis, "1");
    for (auto solver : {Solver::dop853, Solver::frame_exponential}) {
      const auto s = evolve(s0, h, 0.0, M_PI / (kSqrt2 * omega), quiet(solver));
      CHECK(s.population("1") < 1e-10);
      CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("zero Hamiltonian is the identity") {
    ComplexState s{gap_basis(), Eigen::VectorXcd::Zero(4)};
    s.amplitudes << 0.5, cplx(0, 0.5), -0.5, cplx(0.5, 0);
    CHECK(max_diff(evolve(s, h_zero(gap_basis()), 0.0, 3.0, quiet()), s) == 0.0);
  }

  TEST_CASE("single rail at rest follows the two-level Rabi solution") {
    const double omega = 5.0;
    const double z0 = 0.13;
    const double k = k_minus();
    const auto h = h_single_rail(omega, k, {z0, 0.0});
    const auto s0 = ComplexState::basis_state(h.basis, "1");
    for (double t : {0.1, 0.37, 1.2}) {
      const auto s = evolve(s0, h, 0.0, t, quiet());
      CHECK(std::abs(s.amplitude("1") - std::cos(omega * t / 2)) < 1e-9);
      CHECK(std::abs(s.amplitude("r1") + I * std::exp(I * k * z0) * std::sin(omega * t / 2)) < 1e-9);
    }
  }

  TEST_CASE("diagonal Hamiltonian: oracle is exact for any slicing") {
    const auto& cfg = builtin_config("rb87-5p12");
    const auto v = interaction_shifts(cfg.interactions, cfg.levels);
    const auto h = h_gate_nine(0.0, 0.0, 5.35, 5.53, {0, 0.1}, {0, 0.2}, v);
    ComplexState s{gate_nine_basis(), Eigen::VectorXcd::Constant(9, 1.0 / 3.0)};
    const double t = 0.8;
    const auto one = evolve_oracle(s, h, 0.0, t, 1);
    const auto many = evolve_oracle(s, h, 0.0, t, 17);
    const auto diag = h.at(0.0).diagonal();
    for (int i = 0; i < 9; ++i) {
      const cplx exact = s.amplitudes(i) * std::exp(-I * diag(i) * t);
      CHECK(std::abs(one.amplitudes(i) - exact) < 1e-13);
      CHECK(std::abs(many.amplitudes(i) - exact) < 1e-12);
    }
    CHECK(max_diff(evolve(s, h, 0.0, t, quiet(Solver::frame_exponential)), one) < 1e-12);
    // Accumulated phase here is several hundred radians; DOP853 error scales with it.
    CHECK(max_diff(evolve(s, h, 0.0, t, quiet()), one) < 1e-7);
  }

  TEST_CASE("evolve agrees with the oracle on the slow four-field drive") {
    const auto h = h_four_field(units::mhz_to_rad_per_us(0.5), k_minus(), {0.0, 0.031});
    const auto s0 = ComplexState::basis_state(h.basis, "1");
    const auto oracle = evolve_oracle(s0, h, 0.0, 0.5, 100000);
    CHECK(max_diff(evolve(s0, h, 0.0, 0.5, quiet()), oracle) < 1e-8);
    CHECK(oracle.population("1") == doctest::Approx(3.54e-7).epsilon(0.05));
  }

  TEST_CASE("evolve agrees with the oracle on randomized single-atom drives") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& cfg = builtin_config("rb87-5p12");
    for (int trial = 0; trial < 6; ++trial) {
      const double omega = units::mhz_to_rad_per_us(0.5 + 2.0 * u(rng));
      const Motion m{-5.0 + 10.0 * u(rng), -0.2 + 0.4 * u(rng)};
      const double t1 = 0.2 + 0.3 * u(rng);
      const Hamiltonian hs[] = {
          h_dual_rail(omega, cfg.wavevectors.k_excite, m),
          h_gap_four_level({StageKind::wait_with_infrared, omega, t1}, cfg.wavevectors, m),
      };
      for (const auto& h : hs) {
        ComplexState s0 = ComplexState::basis_state(h.basis, h.basis.label(0));
        s0.amplitudes.setConstant(1.0 / std::sqrt(static_cast<double>(h.dim())));
        const auto oracle = evolve_oracle(s0, h, 0.0, t1, 40000);
        CHECK(max_diff(evolve(s0, h, 0.0, t1, quiet(Solver::dop853)), oracle) < 1e-8);
        CHECK(max_diff(evolve(s0, h, 0.0, t1, quiet(Solver::frame_exponential)), oracle) < 1e-8);
      }
    }
  }

  TEST_CASE("frame solver and DOP853 agree on the nine-level gate sector") {
    const auto& cfg = builtin_config("rb87-5p12");
    const auto v = interaction_shifts(cfg.interactions, cfg.levels);
    const double w = units::mhz_to_rad_per_us(2.0);
    const auto h = h_gate_nine(w, w, cfg.wavevectors.k_excite, cfg.wavevectors.k_wait, {0.0, 0.3}, {0.0, -0.2}, v);
    const auto s0 = ComplexState::basis_state(h.basis, "r11");
    const auto a = evolve(s0, h, 0.1, 0.8, quiet(Solver::dop853));
    const auto b = evolve(s0, h, 0.1, 0.8, quiet(Solver::frame_exponential));
    CHECK(max_diff(a, b) < 1e-8);
    const auto oracle = evolve_oracle(s0, h, 0.1, 0.15, 200000);
    CHECK(max_diff(evolve(s0, h, 0.1, 0.15, quiet(Solver::frame_exponential)), oracle) < 1e-8);
  }

  TEST_CASE("norm drift stays below 1e-10 per microsecond") {
    const auto& cfg = builtin_config("rb87-5p12");
    const double w = units::mhz_to_rad_per_us(2.0);
    const auto h = h_dual_rail(w, cfg.wavevectors.k_excite, {0.0, 0.2});
    const auto s0 = ComplexState::basis_state(h.basis, "1");
    const double t = 4.0;
    const auto s = evolve(s0, h, 0.0, t, quiet());
    CHECK(std::abs(s.norm() - 1.0) / t < 1e-10);
    const auto g = h_gap_four_level({StageKind::wait_with_infrared, w, t}, cfg.wavevectors, {0.0, 0.2});
    auto r = ComplexState::basis_state(g.basis, "r1");
    r = evolve(r, g, 0.0, t, quiet());
    CHECK(std::abs(r.norm() - 1.0) / t < 1e-10);
  }

  TEST_CASE("forward then reversed negated sequence returns to the start") {
    const double w = units::mhz_to_rad_per_us(2.0);
    const auto a = h_dual_rail(w, k_minus(), {0.3, 0.0});
    const auto b = h_dual_rail(-1.3 * w, k_minus(), {0.3, 0.0});
    ComplexState s0 = ComplexState::basis_state(a.basis, "1");
    const auto forward = run_schedule(s0, {{"a", 0.2, a}, {"b", 0.45, b}}, quiet());
    const auto back = run_schedule(forward.final_state, {{"b", 0.45, negated(b)}, {"a", 0.2, negated(a)}}, quiet());
    CHECK(max_diff(back.final_state, s0) < 1e-8);
  }

  TEST_CASE("two constant pi pulses return to |1> with a pi phase") {
    const auto& cfg = builtin_config("rb87-5p12");
    const double w = units::mhz_to_rad_per_us(2.0);
    const double tp = M_PI / (kSqrt2 * w);
    const auto traj = run_sequence(ComplexState::basis_state(gap_basis(), "1"),
                                   {{StageKind::excite, w, tp}, {StageKind::deexcite, w, tp}}, cfg.wavevectors,
                                   {0.0, 0.0}, quiet());
    CHECK(std::abs(traj.final_state.amplitude("1") + 1.0) < 1e-9);
    // Rydberg residence for a constant pulse is the integral of sin^2.
    CHECK(traj.rydberg_time == doctest::Approx(tp).epsilon(1e-9));
    REQUIRE(traj.stage_end_times.size() == 2);
    CHECK(traj.stage_end_times[1] == doctest::Approx(2 * tp));
  }

  TEST_CASE("Rydberg time of a single pi pulse") {
    const double w = units::mhz_to_rad_per_us(1.3);
    const double tp = M_PI / (kSqrt2 * w);
    const auto h = h_dual_rail(w, k_minus(), {0.0, 0.0});
    for (auto solver : {Solver::dop853, Solver::frame_exponential}) {
      const auto traj = run_schedule(ComplexState::basis_state(h.basis, "1"), {{"pi", tp, h}}, quiet(solver));
      CHECK(traj.rydberg_time == doctest::Approx(tp / 2).epsilon(1e-9));
      CHECK(traj.rydberg_time >= 0.0);
      CHECK(traj.rydberg_time <= traj.duration());
    }
  }

  TEST_CASE("four-field and sqrt2-scaled dual rail give the same ground trajectory") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
      const double w = units::mhz_to_rad_per_us(0.3 + u(rng));
      const Motion m{-3.0 + 6.0 * u(rng), 0.1 * u(rng)};
      const auto four = h_four_field(w, k_minus(), m);
      const auto dual = h_dual_rail(kSqrt2 * w, k_minus(), m);
      auto s4 = ComplexState::basis_state(four.basis, "1");
      auto s2 = s4;
      for (double t = 0.0; t < 2.0; t += 0.5) {
        s4 = evolve(s4, four, t, t + 0.5, quiet());
        s2 = evolve(s2, dual, t, t + 0.5, quiet());
        CHECK(std::abs(s4.amplitude("1") - s2.amplitude("1")) < 1e-9);
      }
    }
  }

  TEST_CASE("runs are bit-for-bit deterministic") {
    const auto& cfg = builtin_config("rb87-5p12");
    const double w = units::mhz_to_rad_per_us(2.0);
    const std::vector<DriveStage> stages{{StageKind::excite, w, 0.17},
                                         {StageKind::wait_with_infrared, w, 0.7},
                                         {StageKind::deexcite, -w, 0.52}};
    PropagatorOptions o;
    o.samples_per_stage = 50;
    const auto a = run_sequence(ComplexState::basis_state(gap_basis(), "1"), stages, cfg.wavevectors, {0, 0.07}, o);
    const auto b = run_sequence(ComplexState::basis_state(gap_basis(), "1"), stages, cfg.wavevectors, {0, 0.07}, o);
    CHECK(a.final_state.amplitudes == b.final_state.amplitudes);
    CHECK(a.rydberg_time == b.rydberg_time);
    std::ostringstream ca, cb;
    write_trajectory_csv(ca, gap_basis(), a.samples);
    write_trajectory_csv(cb, gap_basis(), b.samples);
    CHECK(ca.str() == cb.str());
  }

  TEST_CASE("trajectory samples and CSV layout") {
    const double w = units::mhz_to_rad_per_us(2.0);
    const auto h = h_dual_rail(w, k_minus(), {0.0, 0.05});
    PropagatorOptions o;
    o.samples_per_stage = 10;
    const auto traj =
        run_schedule(ComplexState::basis_state(h.basis, "1"), {{"a", 0.2, h}, {"b", 0.3, h}}, o);
    REQUIRE(traj.samples.size() == 21);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    CHECK(traj.samples.back().t == doctest::Approx(0.5));

    std::ostringstream csv;
    write_trajectory_csv(csv, h.basis, traj.samples);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t_us,pop_r2,pop_r1,pop_1,phase_r2,phase_r1,phase_1");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 21);
    CHECK(csv.str().back() == '\n');
  }

  TEST_CASE("principal phase branch") {
    CHECK(principal_phase(cplx(-1.0, 0.0)) == doctest::Approx(M_PI));
    CHECK(principal_phase(cplx(-1.0, -0.0)) == doctest::Approx(M_PI));
    CHECK(principal_phase(cplx(0.0, -1.0)) == doctest::Approx(-M_PI / 2));
  }

  TEST_CASE("step budget exhaustion raises an integration error") {
    const auto h = h_dual_rail(units::mhz_to_rad_per_us(2.0), k_minus(), {0.0, 0.05});
    PropagatorOptions o = quiet();
    o.max_steps = 3;
    CHECK_THROWS_AS(evolve(ComplexState::basis_state(h.basis, "1"), h, 0.0, 5.0, o), IntegrationError);
  }
}
