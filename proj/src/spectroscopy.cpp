// Direct-extinction transmission spectra: Lorentzian line model, conversion
// between extinction and scattering probability, weighted nonlinear
// least-squares fitting, and optical loss-chain bookkeeping.

#include "atomlens/spectroscopy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "atomlens/errors.hpp"

namespace atomlens::spectroscopy {

namespace {

void validate_params(const LorentzianParams& p) {
    if (!(p.fwhm_mhz > 0.0)) throw ConfigError("lorentzian: FWHM must be > 0");
    if (!(p.alpha >= 0.0 && p.alpha < 1.0))
        throw ConfigError("lorentzian: alpha must lie in [0, 1)");
    if (!(p.p_sc_max >= 0.0 && p.p_sc_max <= 1.0))
        throw ConfigError("lorentzian: peak P_sc must lie in [0, 1]");
}

// model and analytic Jacobian for the fit, parametrized as
// T(d) = baseline - eps * hw^2 / ((d - center)^2 + hw^2)
struct FitModel {
    static double eval(double d, const std::array<double, 4>& p) {
        const double hw = 0.5 * p[1];
        const double den = (d - p[0]) * (d - p[0]) + hw * hw;
        return p[3] - p[2] * hw * hw / den;
    }
    static std::array<double, 4> grad(double d, const std::array<double, 4>& p) {
        const double hw = 0.5 * p[1];
        const double dd = d - p[0];
        const double den = dd * dd + hw * hw;
        const double lor = hw * hw / den;
        std::array<double, 4> g{};
        g[0] = -p[2] * lor / den * 2.0 * dd;              // d/d center
        g[1] = -p[2] * dd * dd * hw / (den * den);        // d/d fwhm
        g[2] = -lor;                                      // d/d eps
        g[3] = 1.0;                                       // d/d baseline
        return g;
    }
};

// solve the symmetric 4x4 system A x = b in place (Gaussian elimination with
// partial pivoting; the systems here are tiny and well scaled after damping)
std::array<double, 4> solve4(std::array<std::array<double, 4>, 4> a,
                             std::array<double, 4> b) {
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw FitError(FitError::Reason::degenerate_data,
                                               "singular normal equations");
        for (int r = col + 1; r < 4; ++r) {
            double m = a[r][col] / a[col][col];
            for (int c2 = col; c2 < 4; ++c2) a[r][c2] -= m * a[col][c2];
            b[r] -= m * b[col];
        }
    }
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double s = b[r];
        for (int c2 = r + 1; c2 < 4; ++c2) s -= a[r][c2] * x[c2];
        x[r] = s / a[r][r];
    }
    return x;
}

double chi_squared(const std::vector<SpectrumPoint>& pts,
                   const std::array<double, 4>& p) {
    double chi2 = 0.0;
    for (const auto& pt : pts) {
        double w = 1.0 / (pt.sigma * pt.sigma);
        double r = pt.transmission - FitModel::eval(pt.detuning_mhz, p);
        chi2 += w * r * r;
    }
    return chi2;
}

}  // namespace

double p_sc_lorentzian(double detuning_mhz, const LorentzianParams& p) {
    const double hw = 0.5 * p.fwhm_mhz;
    const double dd = detuning_mhz - p.center_mhz;
    return p.p_sc_max * hw * hw / (dd * dd + hw * hw);
}

std::vector<SpectrumPoint> transmission_model(const std::vector<double>& detuning_mhz,
                                              const LorentzianParams& p) {
    validate_params(p);
    std::vector<SpectrumPoint> out;
    out.reserve(detuning_mhz.size());
    for (double d : detuning_mhz) {
        double psc = p_sc_lorentzian(d, p);
        out.push_back({d, 1.0 - psc + p.alpha * psc, 0.0});
    }
    return out;
}

double extinction_to_scattering(double eps, double alpha) {
    if (!(eps >= 0.0 && eps < 1.0))
        throw ConfigError("extinction must lie in [0, 1)");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw ConfigError("collection efficiency must lie in [0, 1)");
    return eps / (1.0 - alpha);
}

double broadened_fwhm_mhz(double fwhm_mhz, double laser_mhz) {
    return std::sqrt(fwhm_mhz * fwhm_mhz + laser_mhz * laser_mhz);
}

SyntheticSpectrum synthesize_spectrum(const std::vector<double>& detuning_mhz,
                                      const LorentzianParams& p, double sigma_t,
                                      RandomStream& rng, bool physical) {
    if (!(sigma_t > 0.0)) throw ConfigError("synthetic spectrum: sigma must be > 0");
    SyntheticSpectrum out;
    if (physical && p.fwhm_mhz < natural_linewidth_mhz) {
        std::ostringstream w;
        w << "requested FWHM " << p.fwhm_mhz << " MHz is below the natural linewidth "
          << natural_linewidth_mhz << " MHz";
        out.warning = w.str();
    }
    out.points = transmission_model(detuning_mhz, p);
    for (auto& pt : out.points) {
        // Box-Muller, deterministic under the stream contract
        double u1 = rng.uniform01();
        double u2 = rng.uniform01();
        while (u1 <= 0.0) u1 = rng.uniform01();
        double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        pt.transmission += sigma_t * g;
        pt.sigma = sigma_t;
    }
    return out;
}

LorentzianFit fit_lorentzian(const std::vector<SpectrumPoint>& points) {
    if (points.size() < 5)
        throw ConfigError("lorentzian fit needs at least 5 points");
    for (const auto& pt : points) {
        if (!(pt.sigma > 0.0) || !std::isfinite(pt.sigma))
            throw ConfigError("lorentzian fit needs finite positive uncertainties");
        if (!(pt.transmission > 0.0))
            throw ConfigError("transmission values must be > 0");
    }
    double t_min = points[0].transmission, t_max = points[0].transmission;
    double d_at_min = points[0].detuning_mhz;
    for (const auto& pt : points) {
        if (pt.transmission < t_min) {
            t_min = pt.transmission;
            d_at_min = pt.detuning_mhz;
        }
        t_max = std::max(t_max, pt.transmission);
    }
    if (t_max - t_min == 0.0)
        throw FitError(FitError::Reason::degenerate_data,
                       "all transmission values are equal");

    // derivative-free initial guesses: center at the minimum, FWHM from the
    // span of points below half depth
    double half = t_max - 0.5 * (t_max - t_min);
    double lo = d_at_min, hi = d_at_min;
    for (const auto& pt : points) {
        if (pt.transmission < half) {
            lo = std::min(lo, pt.detuning_mhz);
            hi = std::max(hi, pt.detuning_mhz);
        }
    }
    std::array<double, 4> p{d_at_min, std::max(hi - lo, 1e-3), t_max - t_min, t_max};

    // Levenberg-Marquardt with additive damping
    double lambda = 1e-3;
    double chi2 = chi_squared(points, p);
    const int max_iter = 200;
    int iter = 0;
    bool converged = false;
    for (; iter < max_iter; ++iter) {
        std::array<std::array<double, 4>, 4> jtj{};
        std::array<double, 4> jtr{};
        for (const auto& pt : points) {
            double w = 1.0 / (pt.sigma * pt.sigma);
            double r = pt.transmission - FitModel::eval(pt.detuning_mhz, p);
            auto g = FitModel::grad(pt.detuning_mhz, p);
            for (int i = 0; i < 4; ++i) {
                jtr[i] += w * r * g[i];
                for (int j = 0; j < 4; ++j) jtj[i][j] += w * g[i] * g[j];
            }
        }
        auto damped = jtj;
        for (int i = 0; i < 4; ++i) damped[i][i] += lambda * jtj[i][i];
        std::array<double, 4> step{};
        try {
            step = solve4(damped, jtr);
        } catch (const FitError&) {
            lambda *= 10.0;
            if (lambda > 1e12)
                throw FitError(FitError::Reason::non_convergence,
                               "normal equations stayed singular");
            continue;
        }
        std::array<double, 4> trial{p[0] + step[0], p[1] + step[1], p[2] + step[2],
                                    p[3] + step[3]};
        trial[1] = std::abs(trial[1]);  // FWHM sign is a gauge freedom
        double trial_chi2 = chi_squared(points, trial);
        if (trial_chi2 <= chi2) {
            double rel = (chi2 - trial_chi2) / std::max(chi2, 1e-300);
            p = trial;
            chi2 = trial_chi2;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (rel < 1e-12) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    if (!converged && iter == max_iter)
        throw FitError(FitError::Reason::non_convergence,
                       "lorentzian fit did not converge");

    // curvature-based 1-sigma uncertainties: covariance = (J^T W J)^-1
    std::array<std::array<double, 4>, 4> jtj{};
    for (const auto& pt : points) {
        double w = 1.0 / (pt.sigma * pt.sigma);
        auto g = FitModel::grad(pt.detuning_mhz, p);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) jtj[i][j] += w * g[i] * g[j];
    }
    std::array<double, 4> sigma{};
    for (int i = 0; i < 4; ++i) {
        std::array<double, 4> e{};
        e[i] = 1.0;
        auto col = solve4(jtj, e);
        sigma[i] = std::sqrt(std::max(col[i], 0.0));
    }

    LorentzianFit fit;
    fit.center_mhz = p[0];
    fit.fwhm_mhz = p[1];
    fit.eps_max = p[2];
    fit.baseline = p[3];
    fit.center_sigma = sigma[0];
    fit.fwhm_sigma = sigma[1];
    fit.eps_sigma = sigma[2];
    fit.baseline_sigma = sigma[3];
    fit.iterations = iter;
    fit.chi2 = chi2;
    return fit;
}

LorentzianFit resample_fit_uncertainties(const std::vector<SpectrumPoint>& points,
                                         int n_resamples, std::uint64_t seed) {
    if (n_resamples < 8)
        throw ConfigError("resampling cross check needs at least 8 replicas");
    LorentzianFit base = fit_lorentzian(points);
    std::vector<SpectrumPoint> replica = points;
    RandomStream rng(seed);
    std::vector<std::array<double, 4>> draws;
    draws.reserve(static_cast<std::size_t>(n_resamples));
    for (int r = 0; r < n_resamples; ++r) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            double u1 = rng.uniform01();
            double u2 = rng.uniform01();
            while (u1 <= 0.0) u1 = rng.uniform01();
            double g = std::sqrt(-2.0 * std::log(u1)) *
                       std::cos(6.283185307179586 * u2);
            // fitted model: T(d) = baseline - eps * unit_lorentzian(d)
            LorentzianParams p{base.eps_max, base.fwhm_mhz, base.center_mhz, 0.0};
            double model = base.baseline - p_sc_lorentzian(points[i].detuning_mhz, p);
            replica[i].transmission = model + points[i].sigma * g;
        }
        LorentzianFit f = fit_lorentzian(replica);
        draws.push_back({f.center_mhz, f.fwhm_mhz, f.eps_max, f.baseline});
    }
    auto stdev = [&](int idx) {
        double mean = 0.0;
        for (const auto& d : draws) mean += d[static_cast<std::size_t>(idx)];
        mean /= static_cast<double>(draws.size());
        double var = 0.0;
        for (const auto& d : draws) {
            double diff = d[static_cast<std::size_t>(idx)] - mean;
            var += diff * diff;
        }
        return std::sqrt(var / (static_cast<double>(draws.size()) - 1.0));
    };
    LorentzianFit out = base;
    out.center_sigma = stdev(0);
    out.fwhm_sigma = stdev(1);
    out.eps_sigma = stdev(2);
    out.baseline_sigma = stdev(3);
    return out;
}

double chain_transmission(const LossChain& chain) {
    if (chain.empty()) throw ConfigError("loss chain is empty");
    double total = 1.0;
    for (const auto& el : chain) {
        if (!(el.transmission > 0.0 && el.transmission <= 1.0))
            throw ConfigError("loss chain element '" + el.name +
                              "': transmission must lie in (0, 1]");
        total *= el.transmission;
    }
    return total;
}

LossChain load_loss_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open loss chain file: " + path);
    LossChain chain;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        LossElement el;
        if (!(row >> el.name)) continue;
        if (!(row >> el.transmission)) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 'name transmission'";
            throw ConfigError(msg.str());
        }
        chain.push_back(el);
    }
    return chain;
}

std::vector<SpectrumPoint> load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spectrum file: " + path);
    std::vector<SpectrumPoint> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        SpectrumPoint pt;
        if (!(row >> pt.detuning_mhz)) continue;
        if (!(row >> pt.transmission >> pt.sigma)) {
            std::ostringstream msg;
            msg << path << ":" << lineno
                << ": expected 'detuning_mhz transmission sigma'";
            throw ConfigError(msg.str());
        }
        pts.push_back(pt);
    }
    return pts;
}

}  // namespace atomlens::spectroscopy
