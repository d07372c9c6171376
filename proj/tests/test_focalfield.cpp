#include <doctest.h>

#include <cmath>

#include "atomlens/constants.hpp"
#include "atomlens/errors.hpp"
#include "atomlens/focalfield.hpp"

using namespace atomlens;
using namespace atomlens::focalfield;

namespace {

// probe geometry: lambda 780 nm, f = 4.5 mm, NA 0.55, w_L set so the
// Gaussian-optics focal waist is 860 nm
BeamGeometry experiment_beam() {
    BeamGeometry b;
    b.wavelength = 780e-9;
    b.focal_length = 4.5e-3;
    b.aperture_na = 0.55;
    b.power = 1e-6;
    b.input_waist = b.wavelength * b.focal_length / (constants::pi * 860e-9);
    b.handedness = Handedness::sigma_plus;
    return b;
}

}  // namespace

TEST_CASE("beam validation rejects bad geometry") {
    BeamGeometry b = experiment_beam();
    b.aperture_na = 1.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = experiment_beam();
    b.input_waist = 0.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = experiment_beam();
    b.aperture_na = 1.2;
    CHECK_THROWS_AS(lens_transform(b), ConfigError);
}

TEST_CASE("lens transform: weak focusing limit is the identity") {
    BeamGeometry b = experiment_beam();
    b.input_waist = 1e-4 * b.focal_length;  // u -> 0
    auto samples = lens_transform(b, 512);
    // only the occupied part of the aperture matters; beyond ~5 u the
    // amplitude is negligible
    for (const auto& s : samples) {
        if (s.amplitude < 1e-6) continue;
        CHECK(s.amplitude / std::exp(-std::pow(std::tan(s.theta) / b.focusing_strength(), 2)) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(s.pol_co == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(s.pol_z) < 1e-3);
        CHECK(std::abs(s.pol_counter) < 1e-6);
    }
}

TEST_CASE("lens transform: off-axis rays feed z and counter components") {
    auto samples = lens_transform(experiment_beam(), 64);
    bool seen = false;
    for (const auto& s : samples) {
        if (s.theta > 0.1) {
            CHECK(s.pol_z > 0.0);
            CHECK(s.pol_counter > 0.0);
            seen = true;
        }
    }
    CHECK(seen);
    // distribution is square integrable: finite amplitudes everywhere
    for (const auto& s : samples) CHECK(std::isfinite(s.amplitude));
}

TEST_CASE("aperture transmission: quadrature vs closed form vs 2-D oracle") {
    BeamGeometry b = experiment_beam();
    b.input_waist = 2.0e-3;  // make truncation visible
    double analytic = aperture_transmission(b);
    double quad = aperture_transmission_quadrature(b);
    CHECK(quad == doctest::Approx(analytic).epsilon(1e-6));

    // independent oracle: brute-force 2-D integration of the truncated
    // Gaussian intensity over the aperture disc
    double a = b.aperture_radius();
    int n = 1200;
    double sum = 0.0, total = 0.0;
    double span = 4.0 * std::max(a, b.input_waist);
    double h = span / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = (i + 0.5) * h - span / 2;
            double y = (j + 0.5) * h - span / 2;
            double inten = std::exp(-2.0 * (x * x + y * y) /
                                    (b.input_waist * b.input_waist));
            total += inten;
            if (x * x + y * y <= a * a) sum += inten;
        }
    CHECK(quad == doctest::Approx(sum / total).epsilon(2e-4));

    // check against the closed form in terms of f, NA, w_L
    double na = b.aperture_na;
    double expected = 1.0 - std::exp(-2.0 * b.focal_length * b.focal_length * na * na /
                                     (b.input_waist * b.input_waist * (1.0 - na * na)));
    CHECK(analytic == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("energy conservation through the lens at experiment geometry") {
    // the lens applies phase and polarization rotation only, so the power in
    // the lens plane behind it (= the flux arriving at the focal plane) must
    // equal the input power up to the negligible aperture clipping
    BeamGeometry b = experiment_beam();
    double through = aperture_transmission_quadrature(b);
    CHECK(std::abs(through - 1.0) < 1e-4);
}

TEST_CASE("focal field: linearity in power") {
    BeamGeometry b = experiment_beam();
    auto f1 = focal_field(b, FocusModel::full);
    b.power = 0.0;
    auto f0 = focal_field(b, FocusModel::full);
    CHECK(std::abs(f0.e_co) == 0.0);
    CHECK(std::abs(f0.e_counter) == 0.0);
    CHECK(std::abs(f0.e_z) == 0.0);

    b.power = 2e-6;
    auto f2 = focal_field(b, FocusModel::full);
    CHECK(std::abs(f2.e_co) / std::abs(f1.e_co) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("focal field: on-axis counter and z components vanish") {
    auto field = focal_field(experiment_beam(), FocusModel::full);
    CHECK(std::abs(field.e_counter) == 0.0);
    CHECK(std::abs(field.e_z) == 0.0);
    CHECK(std::abs(field.e_co) > 0.0);
}

TEST_CASE("paraxial focal waist reproduces the 860 nm calibration") {
    BeamGeometry b = experiment_beam();
    CHECK(paraxial_waist(b) == doctest::Approx(860e-9).epsilon(0.01));

    // the numeric profile extraction agrees with Gaussian optics where the
    // parabolic wavefront is still a good sphere (weak focusing)
    b.input_waist = 0.2e-3;
    double numeric = focal_waist_numeric(b, FocusModel::paraxial);
    CHECK(numeric == doctest::Approx(paraxial_waist(b)).epsilon(1e-3));
}

TEST_CASE("scattering probability: anchors at the experiment geometry") {
    BeamGeometry b = experiment_beam();
    auto para = scattering_probability(b, FocusModel::paraxial);
    auto full = scattering_probability(b, FocusModel::full);
    CHECK(para.p_sc == doctest::Approx(0.022).epsilon(0.15));
    CHECK(full.p_sc == doctest::Approx(0.203).epsilon(0.05));
    CHECK(full.p_sc > para.p_sc);
}

TEST_CASE("scattering probability is independent of input power") {
    BeamGeometry b = experiment_beam();
    auto p1 = scattering_probability(b, FocusModel::full).p_sc;
    b.power *= 10.0;
    auto p2 = scattering_probability(b, FocusModel::full).p_sc;
    CHECK(p1 == p2);  // exact invariance
}

TEST_CASE("weak focusing: P_sc tends to zero and models agree") {
    BeamGeometry b = experiment_beam();
    double prev = 1.0;
    for (double u : {0.05, 0.02, 0.01}) {
        b.input_waist = u * b.focal_length;
        double pf = scattering_probability(b, FocusModel::full).p_sc;
        double pp = scattering_probability(b, FocusModel::paraxial).p_sc;
        CHECK(pf < prev);
        CHECK(pf == doctest::Approx(3.0 * u * u).epsilon(0.02));
        CHECK(std::abs(pf - pp) / pp < 0.05);
        prev = pf;
    }
}

TEST_CASE("quadrature convergence: order doubling leaves P_sc unchanged") {
    BeamGeometry b = experiment_beam();
    QuadratureOptions opt;
    opt.adaptive.rel_tol = 1e-9;
    double p1 = scattering_probability(b, FocusModel::full, opt).p_sc;
    opt.adaptive.initial_order = 64;
    opt.adaptive.rel_tol = 1e-12;
    double p2 = scattering_probability(b, FocusModel::full, opt).p_sc;
    CHECK(std::abs(p1 - p2) / p2 < 1e-5);
}

TEST_CASE("scan: empty and single-point grids") {
    BeamGeometry b = experiment_beam();
    auto empty = scan_focusing(b, ScanVariable::focusing_strength, 0.1, 0.5, 0,
                               FocusModel::full);
    CHECK(empty.empty());
    auto one = scan_focusing(b, ScanVariable::focusing_strength, 0.2887, 0.9, 1,
                             FocusModel::full);
    REQUIRE(one.size() == 1);
    CHECK(one[0].u == doctest::Approx(0.2887));
    CHECK(one[0].p_sc == doctest::Approx(0.203).epsilon(0.06));
}

TEST_CASE("paraxial scan stays a probability across the aperture regime") {
    BeamGeometry b = experiment_beam();
    auto table = scan_focusing(b, ScanVariable::focusing_strength, 0.05, 0.6, 12,
                               FocusModel::paraxial);
    for (const auto& pt : table) {
        CHECK(pt.p_sc >= 0.0);
        CHECK(pt.p_sc <= 1.0);
    }
}

TEST_CASE("scan: strong-focusing NA scan reaches the 95% regime") {
    BeamGeometry b = experiment_beam();
    auto table = scan_focusing(b, ScanVariable::numerical_aperture, 0.5, 0.9, 9,
                               FocusModel::full);
    REQUIRE(table.size() == 9);
    double best = 0.0, best_na = 0.0;
    for (const auto& pt : table) {
        if (pt.p_sc > best) {
            best = pt.p_sc;
            best_na = pt.na;
        }
    }
    CHECK(best == doctest::Approx(0.95).epsilon(0.035));
    CHECK(best_na == doctest::Approx(0.9).epsilon(1e-12));
    // the attainable coupling grows monotonically with aperture
    for (std::size_t i = 1; i < table.size(); ++i)
        CHECK(table[i].p_sc > table[i - 1].p_sc);
}
