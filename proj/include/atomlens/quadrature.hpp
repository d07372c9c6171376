#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace atomlens::quadrature {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes/weights by Newton iteration on P_n; rules are cached per order.
const GaussLegendreRule& gauss_legendre(int order);

struct AdaptiveOptions {
    int initial_order = 32;
    int max_order = 8192;
    double rel_tol = 1e-9;
    double abs_floor = 1e-300;  // treat |I| below this as zero for the rel test
};

// Integrates f over [a, b] with Gauss-Legendre, doubling the order until two
// consecutive orders agree to rel_tol. Throws QuadratureError when max_order
// is reached without convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt = {});

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const AdaptiveOptions& opt = {});

}  // namespace atomlens::quadrature
