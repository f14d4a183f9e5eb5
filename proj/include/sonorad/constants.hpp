#pragma once

namespace sonorad::constants {

// SI defining constants (2019 redefinition); c is exact, kB is exact,
// hbar is h/2pi with h exact.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 2.99792458e8;        // m/s
inline constexpr double kB = 1.380649e-23;       // J/K

}  // namespace sonorad::constants
