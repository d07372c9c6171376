#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "atomlens/errors.hpp"
#include "atomlens/random.hpp"
#include "atomlens/spectroscopy.hpp"

using namespace atomlens;
using namespace atomlens::spectroscopy;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * i / (n - 1));
    return g;
}

}  // namespace

TEST_CASE("transmission model: peak, wings and half-width") {
    LorentzianParams p{0.098, 7.5, 0.0, 0.0};
    auto pts = transmission_model({0.0, 3.75, -3.75, 100.0}, p);
    CHECK(pts[0].transmission == doctest::Approx(0.902).epsilon(1e-12));
    // at +/- FWHM/2 the extinction halves
    CHECK(1.0 - pts[1].transmission == doctest::Approx(0.049).epsilon(1e-9));
    CHECK(1.0 - pts[2].transmission == doctest::Approx(0.049).epsilon(1e-9));
    CHECK(pts[3].transmission > 0.999);

    LorentzianParams zero{0.0, 7.5, 0.0, 0.0};
    for (const auto& pt : transmission_model(grid(-20, 20, 11), zero))
        CHECK(pt.transmission == 1.0);

    LorentzianParams bad{0.1, 7.5, 0.0, 1.0};
    CHECK_THROWS_AS(transmission_model({0.0}, bad), ConfigError);
}

TEST_CASE("transmission stays in (1 - P_max, 1] with minimum at center") {
    LorentzianParams p{0.3, 8.0, 2.0, 0.2};
    auto pts = transmission_model(grid(-30, 30, 241), p);
    double t_min = 2.0;
    double d_min = 0.0;
    for (const auto& pt : pts) {
        CHECK(pt.transmission <= 1.0);
        CHECK(pt.transmission > 1.0 - p.p_sc_max);
        if (pt.transmission < t_min) {
            t_min = pt.transmission;
            d_min = pt.detuning_mhz;
        }
    }
    CHECK(d_min == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("extinction to scattering probability") {
    CHECK(extinction_to_scattering(0.098, 0.0) == doctest::Approx(0.098));
    CHECK(extinction_to_scattering(0.098, 0.05) == doctest::Approx(0.098 / 0.95));
    CHECK(extinction_to_scattering(0.0, 0.3) == 0.0);
    CHECK_THROWS_AS(extinction_to_scattering(0.1, 1.0), ConfigError);
    // with alpha < 0.05 the correction stays below 5.3%
    double corrected = extinction_to_scattering(0.098, 0.05);
    CHECK((corrected - 0.098) / 0.098 < 0.053);
}

TEST_CASE("round trip: model peak extinction maps back to P_sc_max") {
    for (double alpha : {0.0, 0.02, 0.3, 0.9}) {
        LorentzianParams p{0.098, 7.5, 0.0, alpha};
        auto pts = transmission_model({0.0}, p);
        double eps = 1.0 - pts[0].transmission;
        CHECK(extinction_to_scattering(eps, alpha) ==
              doctest::Approx(p.p_sc_max).epsilon(1e-12));
    }
}

TEST_CASE("noiseless fit recovers generating parameters to 1e-6") {
    LorentzianParams p{0.098, 7.5, 1.3, 0.0};
    auto pts = transmission_model(grid(-20, 20, 41), p);
    for (auto& pt : pts) pt.sigma = 1e-3;  // uniform weights
    auto fit = fit_lorentzian(pts);
    CHECK(fit.eps_max == doctest::Approx(0.098).epsilon(1e-6));
    CHECK(fit.fwhm_mhz == doctest::Approx(7.5).epsilon(1e-6));
    CHECK(fit.center_mhz == doctest::Approx(1.3).epsilon(1e-6));
    CHECK(fit.baseline == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("fit is invariant under point reordering") {
    LorentzianParams p{0.074, 9.1, -0.7, 0.0};
    RandomStream rng(11);
    auto synth = synthesize_spectrum(grid(-18, 18, 37), p, 0.004, rng);
    auto fit1 = fit_lorentzian(synth.points);
    auto shuffled = synth.points;
    std::mt19937 mix(3);
    std::shuffle(shuffled.begin(), shuffled.end(), mix);
    auto fit2 = fit_lorentzian(shuffled);
    CHECK(fit1.eps_max == doctest::Approx(fit2.eps_max).epsilon(1e-9));
    CHECK(fit1.fwhm_mhz == doctest::Approx(fit2.fwhm_mhz).epsilon(1e-9));
}

TEST_CASE("noisy fits recover both measured scenarios within 2 sigma") {
    struct Scenario {
        double eps, fwhm;
    };
    for (Scenario s : {Scenario{0.098, 7.5}, Scenario{0.074, 9.1}}) {
        LorentzianParams p{s.eps, s.fwhm, 0.0, 0.0};
        RandomStream rng(401);
        auto synth = synthesize_spectrum(grid(-15, 15, 41), p, 0.003, rng);
        auto fit = fit_lorentzian(synth.points);
        CHECK(std::abs(fit.eps_max - s.eps) < 2.0 * fit.eps_sigma);
        CHECK(std::abs(fit.fwhm_mhz - s.fwhm) < 2.0 * fit.fwhm_sigma);
        // experiment-scale uncertainties: a few 1e-3 on extinction
        CHECK(fit.eps_sigma < 0.004);
        CHECK(fit.fwhm_sigma < 0.5);
    }
}

TEST_CASE("resampling cross check agrees with curvature uncertainties") {
    LorentzianParams p{0.098, 7.5, 0.0, 0.0};
    RandomStream rng(21);
    auto synth = synthesize_spectrum(grid(-15, 15, 41), p, 0.003, rng);
    auto curvature = fit_lorentzian(synth.points);
    auto resampled = resample_fit_uncertainties(synth.points, 400, 77);
    CHECK(resampled.eps_sigma == doctest::Approx(curvature.eps_sigma).epsilon(0.25));
    CHECK(resampled.fwhm_sigma == doctest::Approx(curvature.fwhm_sigma).epsilon(0.25));
    CHECK(resampled.center_sigma == doctest::Approx(curvature.center_sigma).epsilon(0.25));
    CHECK_THROWS_AS(resample_fit_uncertainties(synth.points, 3, 1), ConfigError);
}

TEST_CASE("fit error paths: too few points, degenerate data") {
    LorentzianParams p{0.1, 7.0, 0.0, 0.0};
    auto pts = transmission_model({0.0, 1.0, 2.0}, p);
    for (auto& pt : pts) pt.sigma = 1e-3;
    CHECK_THROWS_AS(fit_lorentzian(pts), ConfigError);

    std::vector<SpectrumPoint> flat;
    for (int i = 0; i < 10; ++i) flat.push_back({static_cast<double>(i), 0.9, 1e-3});
    try {
        fit_lorentzian(flat);
        CHECK(false);
    } catch (const FitError& err) {
        CHECK(err.reason() == FitError::Reason::degenerate_data);
    }
}

TEST_CASE("linewidth floor warning and quadrature broadening") {
    LorentzianParams narrow{0.1, 4.0, 0.0, 0.0};
    RandomStream rng(5);
    auto synth = synthesize_spectrum(grid(-10, 10, 21), narrow, 0.01, rng, true);
    CHECK(!synth.warning.empty());
    auto silent = synthesize_spectrum(grid(-10, 10, 21), narrow, 0.01, rng, false);
    CHECK(silent.warning.empty());

    CHECK(broadened_fwhm_mhz(6.0) == doctest::Approx(std::sqrt(37.0)));
    CHECK(broadened_fwhm_mhz(6.0, 0.0) == doctest::Approx(6.0));
}

TEST_CASE("loss chain: audited chain, identity, permutation invariance") {
    LossChain chain{{"windows_and_lenses", 1.0 - 0.216},
                    {"dichroics_filter_mirror", 1.0 - 0.053},
                    {"fiber_coupling", 1.0 - 0.284}};
    double total = chain_transmission(chain);
    CHECK(total == doctest::Approx(0.531).epsilon(0.002));

    CHECK(chain_transmission({{"one", 1.0}}) == 1.0);

    std::vector<LossChain> perms;
    LossChain p = chain;
    std::sort(p.begin(), p.end(),
              [](const LossElement& a, const LossElement& b) { return a.name < b.name; });
    CHECK(chain_transmission(p) == doctest::Approx(total).epsilon(1e-15));

    CHECK_THROWS_AS(chain_transmission({}), ConfigError);
    CHECK_THROWS_AS(chain_transmission({{"bad", 0.0}}), ConfigError);
    CHECK_THROWS_AS(chain_transmission({{"bad", 1.2}}), ConfigError);
}

TEST_CASE("loss chain data file matches the audited 53% transmission") {
    auto chain = load_loss_chain(std::string(ATOMLENS_DATA_DIR) + "/loss_chain_methods.dsv");
    REQUIRE(chain.size() == 3);
    CHECK(chain_transmission(chain) == doctest::Approx(0.5316).epsilon(0.001));
}
