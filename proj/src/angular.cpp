#include "atomlens/angular.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace atomlens::angular {

namespace {

bool near_half_integer(double x) {
    return std::abs(2 * x - std::round(2 * x)) < 1e-9;
}

int iround(double x) { return static_cast<int>(std::round(x)); }

double fact(int n) {
    static const auto table = [] {
        std::array<double, 40> t{};
        t[0] = 1.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

}  // namespace

double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    if (!near_half_integer(j1) || !near_half_integer(j2) || !near_half_integer(j3) ||
        !near_half_integer(m1) || !near_half_integer(m2) || !near_half_integer(m3))
        return 0.0;
    if (std::abs(m1) > j1 + 1e-9 || std::abs(m2) > j2 + 1e-9 || std::abs(m3) > j3 + 1e-9)
        return 0.0;
    if (std::abs(m1 + m2 + m3) > 1e-9) return 0.0;
    if (j3 < std::abs(j1 - j2) - 1e-9 || j3 > j1 + j2 + 1e-9) return 0.0;
    // triangle coefficient and prefactor
    double tri = std::sqrt(fact(iround(j1 + j2 - j3)) * fact(iround(j1 - j2 + j3)) *
                           fact(iround(-j1 + j2 + j3)) / fact(iround(j1 + j2 + j3 + 1)));
    double pre = std::sqrt(fact(iround(j1 + m1)) * fact(iround(j1 - m1)) *
                           fact(iround(j2 + m2)) * fact(iround(j2 - m2)) *
                           fact(iround(j3 + m3)) * fact(iround(j3 - m3)));
    int tmin = std::max({0, iround(j2 - j3 - m1), iround(j1 - j3 + m2)});
    int tmax = std::min({iround(j1 + j2 - j3), iround(j1 - m1), iround(j2 + m2)});
    double sum = 0.0;
    for (int t = tmin; t <= tmax; ++t) {
        double den = fact(t) * fact(iround(j3 - j2 + m1) + t) * fact(iround(j3 - j1 - m2) + t) *
                     fact(iround(j1 + j2 - j3) - t) * fact(iround(j1 - m1) - t) *
                     fact(iround(j2 + m2) - t);
        sum += ((t % 2 == 0) ? 1.0 : -1.0) / den;
    }
    double phase = (iround(j1 - j2 - m3) % 2 == 0) ? 1.0 : -1.0;
    return phase * tri * pre * sum;
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    double phase = (iround(-j1 + j2 - M) % 2 == 0) ? 1.0 : -1.0;
    return phase * std::sqrt(2 * J + 1) * wigner3j(j1, j2, J, m1, m2, -M);
}

}  // namespace atomlens::angular
