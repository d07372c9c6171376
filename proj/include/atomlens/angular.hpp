#pragma once

namespace atomlens::angular {

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3), Racah formula. Arguments are
// (half-)integers passed as doubles; intended for the small j of alkali
// level structure.
double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3);

// Clebsch-Gordan coefficient <j1 m1, j2 m2 | J M>.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

}  // namespace atomlens::angular
