#include <cmath>

#include "dualrail/protocols.hpp"

namespace dualrail {

namespace {

// sin(x t / 2) / x, continuous at x = 0.
double half_sinc(double x, double t) { return x == 0.0 ? 0.5 * t : std::sin(0.5 * x * t) / x; }

}  // namespace

AnalyticAmplitudes analytic_w(double t, double omega, double k, double z0_um, double v_mps) {
  const double a = k * z0_um;
  const double kv = k * v_mps;
  cplx w1 = 0.0;
  cplx w2 = 0.0;
  for (const double eta : {1.0, -1.0}) {
    const double x = kv + eta * omega;
    const double mid = a + 0.5 * x * t;
    // [f(a) - f(a + x t)] / (2x), written to stay accurate as x -> 0
    w1 += -std::cos(mid) * half_sinc(x, t);
    w2 += std::sin(mid) * half_sinc(x, t);
  }
  AnalyticAmplitudes out;
  out.w1 = cplx(0.0, omega) * w1;
  out.w2 = omega * w2;
  out.within_validity = std::abs(kv) <= 0.1 * std::abs(omega);
  return out;
}

}  // namespace dualrail
