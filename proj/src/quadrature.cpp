#include "atomlens/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "atomlens/constants.hpp"
#include "atomlens/errors.hpp"

namespace atomlens::quadrature {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // nodes come in +/- pairs; solve for the positive half
    int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // recurrence for P_n(x) and P'_n(x)
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

std::mutex cache_mutex;
std::map<int, GaussLegendreRule> cache;

template <class T>
T fixed_order(const std::function<T(double)>& f, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double halfw = 0.5 * (b - a);
    T acc{};
    for (int i = 0; i < order; ++i)
        acc += rule.weights[i] * f(mid + halfw * rule.nodes[i]);
    return acc * halfw;
}

template <class T>
T adaptive(const std::function<T(double)>& f, double a, double b,
           const AdaptiveOptions& opt) {
    if (a == b) return T{};
    T prev = fixed_order(f, a, b, opt.initial_order);
    for (int order = 2 * opt.initial_order; order <= opt.max_order; order *= 2) {
        T cur = fixed_order(f, a, b, order);
        double scale = std::max(std::abs(cur), std::abs(prev));
        if (std::abs(cur - prev) <= opt.rel_tol * scale || scale < opt.abs_floor)
            return cur;
        prev = cur;
    }
    std::ostringstream msg;
    msg << "quadrature did not converge on [" << a << ", " << b
        << "] up to order " << opt.max_order;
    throw QuadratureError(msg.str());
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const AdaptiveOptions& opt) {
    return adaptive<double>(f, a, b, opt);
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    const AdaptiveOptions& opt) {
    return adaptive<std::complex<double>>(f, a, b, opt);
}

}  // namespace atomlens::quadrature
