#pragma once

#include <cmath>

namespace biphoton {

inline constexpr double pi = 3.14159265358979323846;

// Vacuum speed of light, m/s (exact by SI definition).
inline constexpr double speed_of_light = 299792458.0;

// Wavelength (nm) <-> angular frequency (rad/s). All external interfaces
// speak nanometres; everything internal is rad/s.
inline double omega_from_nm(double lambda_nm) {
    return 2.0 * pi * speed_of_light / (lambda_nm * 1e-9);
}

inline double nm_from_omega(double omega) {
    return 2.0 * pi * speed_of_light / omega * 1e9;
}

// |d omega / d lambda| evaluated at lambda_nm, in (rad/s) per nm.
// Used to convert spectral widths between the two unit systems.
inline double omega_per_nm(double lambda_nm) {
    double lm = lambda_nm * 1e-9;
    return 2.0 * pi * speed_of_light / (lm * lm) * 1e-9;
}

inline double deg_from_rad(double rad) { return rad * 180.0 / pi; }
inline double rad_from_deg(double deg) { return deg * pi / 180.0; }

} // namespace biphoton
