#include <fmt/format.h>

#include "dualrail/errors.hpp"
#include "dualrail/parallel.hpp"
#include "dualrail/protocols.hpp"
#include "gate_internal.hpp"

namespace dualrail {

GateGridResult averaged_rotation_error(const GateParams& p, double temperature_uk, const AtomSpecies& species,
                                       GateMethod method, int points, double v_max, const PropagatorOptions& options,
                                       int threads) {
  p.validate(method);
  if (points < 1) throw DomainError("gate grid needs at least one point per qubit");
  if (!(v_max > 0.0)) throw DomainError("gate grid half-width must be positive");
  const VelocityGrid grid = weighted_grid(uniform_velocities(-v_max, v_max, points), temperature_uk, species);
  if (grid.weight_mass < kMinWeightMass) {
    throw ConvergenceError(fmt::format("gate grid captures only {:.6f} of the Maxwell distribution", grid.weight_mass));
  }
  const auto n = static_cast<std::size_t>(points);
  PropagatorOptions opt = options;
  opt.samples_per_stage = 0;

  auto at = [&p](double v_c, double v_t) {
    GateParams q = p;
    q.control.v_mps = v_c;
    q.target.v_mps = v_t;
    return q;
  };

  // Single-qubit pieces depend on one velocity only.
  struct ControlPiece {
    cplx b;
    detail::ControlExcite excite;
  };
  struct TargetPiece {
    cplx a;
    detail::TargetWindow window;
  };
  const auto& v = grid.velocities;
  const auto controls = parallel_map(
      n,
      [&](std::size_t i) {
        const GateParams q = at(v[i], 0.0);
        if (method == GateMethod::traditional) return ControlPiece{detail::traditional_10(q, opt).amplitude, {}};
        return ControlPiece{detail::control_gap(q, opt).amplitude, detail::control_excite(q, opt)};
      },
      threads);
  const auto targets = parallel_map(
      n,
      [&](std::size_t j) {
        const GateParams q = at(0.0, v[j]);
        if (method == GateMethod::traditional) return TargetPiece{detail::traditional_01(q, opt).amplitude, {}};
        auto window = detail::target_window(q, opt);
        const cplx a = window.state.amplitude("1");
        return TargetPiece{a, std::move(window)};
      },
      threads);

  GateGridResult out;
  out.velocities = v;
  out.weights = grid.weights;
  out.weight_mass = grid.weight_mass;
  out.e_ro = parallel_map(
      n * n,
      [&](std::size_t idx) {
        const std::size_t i = idx / n;
        const std::size_t j = idx % n;
        const GateParams q = at(v[i], v[j]);
        const cplx c = method == GateMethod::traditional
                           ? detail::traditional_11(q, opt).amplitude
                           : detail::dual_rail_11(q, controls[i].excite, targets[j].window, opt).amplitude;
        return rotation_error(targets[j].a, controls[i].b, c);
      },
      threads);

  double sum = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = grid.weights[i] * grid.weights[j];
      sum += w * out.e_ro[i * n + j];
      weight += w;
    }
  }
  out.e_ro_bar = sum / weight;
  return out;
}

FidelityReport fidelity(const GateParams& p, double temperature_uk, const AtomSpecies& species, GateMethod method,
                        int points, const PropagatorOptions& options, int threads) {
  FidelityReport r;
  r.e_ro_bar = averaged_rotation_error(p, temperature_uk, species, method, points, 0.5, options, threads).e_ro_bar;
  GateParams rest = p;
  rest.control.v_mps = 0.0;
  rest.target.v_mps = 0.0;
  PropagatorOptions opt = options;
  opt.samples_per_stage = 0;
  r.e_decay = simulate_gate(rest, method, opt).e_decay;
  r.fidelity = fidelity_from(r.e_ro_bar, r.e_decay);
  return r;
}

}  // namespace dualrail
