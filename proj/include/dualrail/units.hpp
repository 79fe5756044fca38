#pragma once

// Internal unit system: time in microseconds, length in micrometers, angular
// frequencies in rad/us, wavevectors in rad/um. Velocities in m/s are
// numerically equal to um/us, so k*v comes out in rad/us directly.

#include <numbers>

namespace dualrail::units {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Ordinary frequency in MHz (e.g. Omega/2pi) to angular frequency in rad/us.
constexpr double mhz_to_rad_per_us(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double rad_per_us_to_mhz(double w) { return w / kTwoPi; }

constexpr double mps_to_um_per_us(double v_mps) { return v_mps; }
constexpr double um_per_us_to_mps(double v) { return v; }

/// Angular wavenumber given in rad/nm to rad/um.
constexpr double rad_per_nm_to_rad_per_um(double k) { return k * 1.0e3; }
constexpr double rad_per_um_to_rad_per_nm(double k) { return k * 1.0e-3; }

/// 2*pi/lambda for a wavelength in nm, expressed in rad/um.
constexpr double wavenumber_from_nm(double lambda_nm) { return kTwoPi / lambda_nm * 1.0e3; }

/// C6 in THz um^6 at separation L (um) to an angular shift in rad/us.
/// The coefficient is an ordinary frequency: 1 THz = 1e6 MHz, times 2*pi.
constexpr double c6_shift_rad_per_us(double c6_thz_um6, double separation_um) {
  const double l2 = separation_um * separation_um;
  const double l6 = l2 * l2 * l2;
  return mhz_to_rad_per_us(c6_thz_um6 * 1.0e6 / l6);
}

}  // namespace dualrail::units
