#pragma once

// Physical constants (CODATA 2018, SI units).
namespace atomlens::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double speed_of_light = 2.99792458e8;        // m/s
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double eps0 = 8.8541878128e-12;              // F/m
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_radius = 5.29177210903e-11;      // m

// atomic unit of electric dipole moment, e*a0
inline constexpr double dipole_au = elementary_charge * bohr_radius;

// atomic unit of polarizability, e^2 a0^2 / E_h
inline constexpr double polarizability_au = 1.64877727436e-41;  // C m^2 / V

}  // namespace atomlens::constants
