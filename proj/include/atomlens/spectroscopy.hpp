#pragma once

#include <string>
#include <vector>

#include "atomlens/random.hpp"

namespace atomlens::spectroscopy {

// natural linewidth of the 87Rb D2 line and typical probe laser linewidth
inline constexpr double natural_linewidth_mhz = 6.0;
inline constexpr double laser_linewidth_mhz = 1.0;

struct SpectrumPoint {
    double detuning_mhz = 0.0;
    double transmission = 0.0;
    double sigma = 0.0;
};

struct LorentzianParams {
    double p_sc_max = 0.0;    // peak scattering probability
    double fwhm_mhz = 0.0;
    double center_mhz = 0.0;
    double alpha = 0.0;       // fraction of scattered light re-collected
};

struct LorentzianFit {
    double center_mhz = 0.0;
    double fwhm_mhz = 0.0;
    double eps_max = 0.0;   // peak extinction, baseline - minimum
    double baseline = 0.0;
    double center_sigma = 0.0;
    double fwhm_sigma = 0.0;
    double eps_sigma = 0.0;
    double baseline_sigma = 0.0;
    int iterations = 0;
    double chi2 = 0.0;
};

struct LossElement {
    std::string name;
    double transmission = 0.0;  // in (0, 1]
};

using LossChain = std::vector<LossElement>;

// Lorentzian scattering probability P_sc(d) and direct-extinction
// transmission T = 1 - P_sc + alpha P_sc on the given detuning grid.
double p_sc_lorentzian(double detuning_mhz, const LorentzianParams& p);
std::vector<SpectrumPoint> transmission_model(const std::vector<double>& detuning_mhz,
                                              const LorentzianParams& p);

// P_sc = eps / (1 - alpha)
double extinction_to_scattering(double eps, double alpha);

// quadrature broadening of the linewidth by the probe laser
double broadened_fwhm_mhz(double fwhm_mhz, double laser_mhz = laser_linewidth_mhz);

// Synthetic measured spectrum: model plus Gaussian shot noise of width
// sigma_t per point. Returns a warning string (empty if none) when a
// physically labeled scenario is generated below the natural linewidth.
struct SyntheticSpectrum {
    std::vector<SpectrumPoint> points;
    std::string warning;
};
SyntheticSpectrum synthesize_spectrum(const std::vector<double>& detuning_mhz,
                                      const LorentzianParams& p, double sigma_t,
                                      RandomStream& rng, bool physical = true);

// Weighted (1/sigma^2) Levenberg-Marquardt Lorentzian fit with parameter
// uncertainties from the curvature at the optimum. Needs >= 5 points; all-
// equal transmissions are reported as degenerate data.
LorentzianFit fit_lorentzian(const std::vector<SpectrumPoint>& points);

// Parametric-resampling cross check of the curvature uncertainties: refit
// n_resamples noisy replicas of the fitted model and report the empirical
// standard deviations in the sigma fields of the returned struct.
LorentzianFit resample_fit_uncertainties(const std::vector<SpectrumPoint>& points,
                                         int n_resamples, std::uint64_t seed);

double chain_transmission(const LossChain& chain);
LossChain load_loss_chain(const std::string& path);

std::vector<SpectrumPoint> load_spectrum(const std::string& path);

}  // namespace atomlens::spectroscopy
