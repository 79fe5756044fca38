#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dualrail/errors.hpp"
#include "dualrail/gate.hpp"
#include "dualrail/presets.hpp"
#include "dualrail/units.hpp"

using namespace dualrail;

namespace {

const double kSqrt2 = std::sqrt(2.0);

PropagatorOptions quiet(Solver s = Solver::frame_exponential) {
  PropagatorOptions o;
  o.samples_per_stage = 0;
  o.solver = s;
  return o;
}

GateParams moving(int n, double vc, double vt, double zc = 0.0, double zt = 0.0) {
  auto p = reference_gate_params(n);
  p.control = {zc, vc};
  p.target = {zt, vt};
  return p;
}

const AtomSpecies& rb() { return builtin_config("rb87-5p12").species; }

}  // namespace

TEST_SUITE("gate") {
  TEST_CASE("rotation error reference points") {
    CHECK(rotation_error(-1.0, -1.0, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rotation_error(1.0, 1.0, 1.0) == doctest::Approx(0.6));
    CHECK(rotation_error(0.0, 0.0, 0.0) == doctest::Approx(0.9));
    // global phase on the non-00 block is not forgiven
    CHECK(rotation_error(cplx(0, 1), cplx(0, 1), cplx(0, 1)) == doctest::Approx(0.3));
  }

  TEST_CASE("decay error bookkeeping") {
    CHECK(decay_error(0.0, 0.0, 0.0, 787.0) == 0.0);
    CHECK(decay_error(1.0, 2.0, 5.0, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(decay_error(1.0, 1.0, 1.0, 0.0), DomainError);
    const double est = decay_error_estimate(units::mhz_to_rad_per_us(2.0), 787.0);
    CHECK(est == doctest::Approx(7.0 * kSqrt2 * M_PI / (4.0 * units::mhz_to_rad_per_us(2.0) * 787.0)));
    CHECK(est == doctest::Approx(7.86e-4).epsilon(2e-3));
  }

  TEST_CASE("gate durations") {
    for (int n : {1, 2}) {
      const auto p = reference_gate_params(n);
      const double w = units::mhz_to_rad_per_us(2.0);
      const double tw = 4.0 * n * M_PI / (kSqrt2 * w);
      CHECK(p.t_wait() == doctest::Approx(tw));
      CHECK(gate_duration(p, GateMethod::dual_rail) ==
            doctest::Approx(M_PI / (kSqrt2 * w) + tw + 3.0 * M_PI / (kSqrt2 * std::abs(p.omega_dp))));
      CHECK(gate_duration(p, GateMethod::traditional) == doctest::Approx(2.0 * M_PI / (kSqrt2 * w) + tw));
    }
    CHECK(std::abs(gate_duration(reference_gate_params(1), GateMethod::dual_rail) - 1.405) < 1e-3);
    CHECK(std::abs(gate_duration(reference_gate_params(1), GateMethod::traditional) - 1.061) < 1e-3);
    CHECK(std::abs(gate_duration(reference_gate_params(2), GateMethod::traditional) - 1.768) < 1e-3);
  }

  TEST_CASE("ideal inputs at rest") {
    for (auto m : {GateMethod::dual_rail, GateMethod::traditional}) {
      CAPTURE(to_string(m));
      const auto p = moving(1, 0.0, 0.0);
      CHECK(simulate_gate_input("00", p, m, quiet()).amplitude == cplx(1.0, 0.0));
      CHECK(std::abs(simulate_gate_input("01", p, m, quiet()).amplitude + 1.0) < 1e-9);
      CHECK(std::abs(simulate_gate_input("10", p, m, quiet()).amplitude + 1.0) < 1e-9);
      CHECK_THROWS_AS(simulate_gate_input("12", p, m, quiet()), DomainError);
    }
    CHECK(parse_gate_method("ours") == GateMethod::dual_rail);
    CHECK(parse_gate_method("traditional") == GateMethod::traditional);
    CHECK_THROWS_AS(parse_gate_method("cz"), DomainError);
  }

  TEST_CASE("blockade-limited error at rest") {
    const auto p = moving(1, 0.0, 0.0);
    const auto r = simulate_gate(p, GateMethod::dual_rail, quiet());
    const double floor = std::pow(kSqrt2 * p.omega / p.shifts.v11, 2) / 8.0;
    CHECK(r.e_ro >= floor);
    CHECK(r.e_ro <= 4.0 * floor);
  }

  TEST_CASE("rotation error is bounded and residence times are sane") {
    for (auto m : {GateMethod::dual_rail, GateMethod::traditional}) {
      for (double vc : {-0.4, 0.0, 0.2}) {
        for (double vt : {-0.3, 0.1}) {
          const auto r = simulate_gate(moving(1, vc, vt), m, quiet());
          CHECK(r.e_ro >= 0.0);
          CHECK(r.e_ro <= 1.0);
          for (double t : r.rydberg_time) {
            CHECK(t >= 0.0);
            CHECK(t <= r.duration);
          }
        }
      }
    }
  }

  TEST_CASE("|11> residence matches |10> within five percent") {
    const auto r = simulate_gate(moving(1, 0.0, 0.0), GateMethod::dual_rail, quiet());
    CHECK(std::abs(r.rydberg_time[2] - r.rydberg_time[1]) <= 0.05 * r.rydberg_time[1]);
    const double ideal = decay_error_ideal(reference_gate_params(1), GateMethod::dual_rail);
    CHECK(r.e_decay == doctest::Approx(ideal).epsilon(0.1));
  }

  TEST_CASE("traditional gate: velocity reversal is time reversal with the blockade sign flipped") {
    // U(-v) is not U(v)*: conjugation reverses time, which flips the sign of
    // the real blockade shift. Single-atom amplitudes carry no shift and are
    // exact conjugates; the full error is symmetric once V11 -> -V11 too.
    for (double vc : {0.05, 0.3}) {
      for (double vt : {-0.2, 0.15}) {
        const auto a = simulate_gate(moving(2, vc, vt), GateMethod::traditional, quiet());
        auto flipped = moving(2, -vc, -vt);
        const auto b = simulate_gate(flipped, GateMethod::traditional, quiet());
        CHECK(std::abs(a.a - std::conj(b.a)) < 1e-9);
        CHECK(std::abs(a.b - std::conj(b.b)) < 1e-9);
        flipped.shifts.v11 = -flipped.shifts.v11;
        const auto c = simulate_gate(flipped, GateMethod::traditional, quiet());
        CHECK(std::abs(a.c - std::conj(c.c)) < 1e-9);
        CHECK(std::abs(a.e_ro - c.e_ro) < 1e-9);
      }
    }
  }

  TEST_CASE("|11> decomposition matches the twelve-level model") {
    for (double vc : {0.0, 0.12, -0.3}) {
      for (double vt : {0.0, 0.2}) {
        const auto p = moving(1, vc, vt, 0.1, -0.2);
        const auto split = simulate_gate_input("11", p, GateMethod::dual_rail, quiet(Solver::dop853));
        const auto full = simulate_gate_11_full(p, quiet(Solver::dop853));
        CHECK(std::abs(split.amplitude - full.amplitude) < 1e-6);
      }
    }
  }

  TEST_CASE("frame solver and DOP853 give the same gate") {
    for (auto m : {GateMethod::dual_rail, GateMethod::traditional}) {
      const auto p = moving(2, 0.21, -0.07, 0.3, 0.0);
      const auto a = simulate_gate(p, m, quiet(Solver::dop853));
      const auto b = simulate_gate(p, m, quiet(Solver::frame_exponential));
      CHECK(std::abs(a.a - b.a) < 1e-7);
      CHECK(std::abs(a.b - b.b) < 1e-7);
      CHECK(std::abs(a.c - b.c) < 1e-7);
    }
  }

  TEST_CASE("dual-rail gate beats the traditional one by an order of magnitude") {
    for (int n : {1, 2}) {
      for (double t : {10.0, 200.0}) {
        CAPTURE(n);
        CAPTURE(t);
        const auto p = reference_gate_params(n);
        const auto ours = averaged_rotation_error(p, t, rb(), GateMethod::dual_rail, 24, 0.5, quiet());
        const auto trad = averaged_rotation_error(p, t, rb(), GateMethod::traditional, 24, 0.5, quiet());
        CHECK(ours.e_ro_bar < trad.e_ro_bar / 10.0);
        CHECK(ours.velocities.size() == 24);
        CHECK(ours.e_ro.size() == 24 * 24);
      }
    }
  }

  TEST_CASE("grid averages and fidelity") {
    const auto p = reference_gate_params(1);
    const auto a = averaged_rotation_error(p, 200.0, rb(), GateMethod::dual_rail, 12, 0.5, quiet(), 1);
    const auto b = averaged_rotation_error(p, 200.0, rb(), GateMethod::dual_rail, 12, 0.5, quiet(), 3);
    CHECK(a.e_ro_bar == b.e_ro_bar);
    double sum = 0.0;
    for (double w : a.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0));
    const auto f = fidelity(p, 200.0, rb(), GateMethod::dual_rail, 12, quiet());
    CHECK_THROWS_AS(averaged_rotation_error(p, 10.0, rb(), GateMethod::dual_rail, 12, 0.5, quiet()), ConvergenceError);
    CHECK(f.fidelity == doctest::Approx(fidelity_from(f.e_ro_bar, f.e_decay)));
    CHECK(f.e_decay == doctest::Approx(simulate_gate(moving(1, 0, 0), GateMethod::dual_rail, quiet()).e_decay));

    std::ostringstream csv;
    write_gate_grid_csv(csv, a);
    CHECK(csv.str().rfind("v_c", 0) == 0);
  }

  TEST_CASE("validation rejects target pulses that overrun the wait") {
    auto p = reference_gate_params(1);
    p.omega_t = units::mhz_to_rad_per_us(0.5);
    CHECK_THROWS_AS(p.validate(GateMethod::dual_rail), DomainError);
    CHECK_THROWS_AS(simulate_gate(p, GateMethod::dual_rail, quiet()), DomainError);
    p = reference_gate_params(1);
    p.omega = 0.0;
    CHECK_THROWS_AS(p.validate(GateMethod::traditional), DomainError);
    CHECK_NOTHROW(reference_gate_params(2).validate(GateMethod::dual_rail));
  }
}
