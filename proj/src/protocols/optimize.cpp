#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "dualrail/errors.hpp"
#include "dualrail/protocols.hpp"
#include "dualrail/units.hpp"

namespace dualrail {

DeexcitationOptimum optimize_deexcitation(double omega, double k, double v_ref_mps, int sign, double bracket,
                                          const PropagatorOptions& options) {
  if (!(omega > 0.0)) throw DomainError("Rabi frequency must be positive");
  if (sign != 1 && sign != -1) throw DomainError("deexcitation sign must be +1 or -1");
  if (!(bracket > 0.0 && bracket < 1.0)) throw DomainError("bracket must lie in (0, 1)");

  // The objective differences near the optimum are ~1e-9, so the inner
  // solves run tighter than the default tolerance.
  PropagatorOptions inner = options;
  inner.samples_per_stage = 0;
  inner.rtol = std::min(options.rtol, 1e-12);
  inner.atol = std::min(options.atol, 1e-14);

  DeexcitationOptimum best;
  auto objective = [&](double magnitude) {
    SimulationParams p;
    p.omega = omega;
    p.omega_dp = sign * magnitude;
    p.v_mps = v_ref_mps;
    ++best.evaluations;
    return run_excite_restore(p, k, inner).error();
  };

  // At rest every 3 pi pulse restores exactly; the objective is flat at
  // round-off level, so keep the nominal amplitude.
  if (v_ref_mps == 0.0) {
    best.omega_dp = sign * omega;
    best.error = objective(omega);
    best.error_at_omega = best.error;
    return best;
  }

  const double lo = omega * (1.0 - bracket);
  const double hi = omega * (1.0 + bracket);
  std::uintmax_t max_iter = 200;
  const auto [x, fx] =
      boost::math::tools::brent_find_minima(objective, lo, hi, std::numeric_limits<double>::digits / 2, max_iter);
  const double edge = 1e-3 * (hi - lo);
  if (x - lo < edge || hi - x < edge) {
    throw OptimizationError(fmt::format("no interior minimum: optimum {:.6f} MHz lies on the bracket [{:.6f}, {:.6f}] MHz",
                                        units::rad_per_us_to_mhz(sign * x), units::rad_per_us_to_mhz(lo),
                                        units::rad_per_us_to_mhz(hi)));
  }
  best.omega_dp = sign * x;
  best.error = fx;
  best.error_at_omega = objective(omega);
  return best;
}

}  // namespace dualrail
