// Focal field of a circularly polarized Gaussian beam behind a strongly
// focusing lens, and the resonant scattering probability of a two-level atom
// placed at the focus.
//
// The lens is modeled as an ideal thin element acting on the collimated
// input: it imprints a converging wavefront and leaves the amplitude profile
// in the lens plane unchanged. Two variants are computed from one on-axis
// Rayleigh-Sommerfeld diffraction integral:
//
//   full     - the wavefront is the exact sphere centered on the geometric
//              focus and the polarization vector is rotated onto the
//              converging directions (a ray at radius rho converges under
//              tan(theta) = rho/f; a sigma+ beam then feeds the co-rotating,
//              z and counter-rotating circular components with weights
//              (1+cos)/2, sin/sqrt(2), (1-cos)/2).
//   paraxial - the wavefront is the parabola k rho^2/(2f) and the
//              polarization is left untouched. The parabola deviates from
//              the sphere by ~k rho^4/(8 f^3), which acts as spherical
//              aberration: the effective focus shifts toward the lens and
//              the peak intensity drops sharply once u = w_L/f grows.
//
// On axis the azimuthal integral is analytic and only the co-rotating
// component survives; the polar integral is evaluated by adaptive
// Gauss-Legendre quadrature with an order-doubling convergence test.

#include "atomlens/focalfield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atomlens/constants.hpp"
#include "atomlens/errors.hpp"

namespace atomlens::focalfield {

namespace c = atomlens::constants;

double BeamGeometry::theta_max() const { return std::asin(aperture_na); }

double BeamGeometry::aperture_radius() const {
    return focal_length * std::tan(theta_max());
}

double BeamGeometry::wavenumber() const { return c::two_pi / wavelength; }

void BeamGeometry::validate() const {
    if (!(wavelength > 0.0)) throw ConfigError("beam: wavelength must be > 0");
    if (!(input_waist > 0.0)) throw ConfigError("beam: input waist must be > 0");
    if (!(focal_length > 0.0)) throw ConfigError("beam: focal length must be > 0");
    if (!(aperture_na > 0.0 && aperture_na < 1.0))
        throw ConfigError("beam: aperture NA must lie in (0, 1)");
    if (!(power >= 0.0)) throw ConfigError("beam: power must be >= 0");
    if (!std::isfinite(focusing_strength()) || !(focusing_strength() > 0.0))
        throw ConfigError("beam: focusing strength w_L/f must be finite and positive");
}

namespace {

// Integration in theta with rho = f tan(theta); the Gaussian envelope makes
// contributions beyond ~4.5 input waists negligible, so the domain is capped
// there to keep oscillatory integrands short.
double domain_theta_max(const BeamGeometry& beam) {
    double t_beam = 4.5 * beam.focusing_strength();
    double t_ap = std::tan(beam.theta_max());
    return std::atan(std::min(t_beam, t_ap));
}

double phase_at(const BeamGeometry& beam, FocusModel model, double z, double theta) {
    const double f = beam.focal_length;
    const double rho = f * std::tan(theta);
    const double rho2 = rho * rho;
    const double rz = std::sqrt(z * z + rho2);
    double wavefront = (model == FocusModel::full)
                           ? rho2 / (std::sqrt(f * f + rho2) + f)
                           : rho2 / (2.0 * f);
    return beam.wavenumber() * (rho2 / (rz + z) - wavefront);
}

// On-axis diffraction amplitude A(z) (units m); P_sc = 12 |A|^2 / w_L^2.
std::complex<double> axial_amplitude(const BeamGeometry& beam, FocusModel model,
                                     double z, const QuadratureOptions& opt) {
    const double f = beam.focal_length;
    const double w = beam.input_waist;
    const double k = beam.wavenumber();
    const double theta_lim = domain_theta_max(beam);
    auto integrand = [&](double theta) -> std::complex<double> {
        const double t = std::tan(theta);
        const double sec2 = 1.0 + t * t;
        const double rho = f * t;
        const double rho2 = rho * rho;
        const double r_sphere = std::sqrt(f * f + rho2);
        const double rz = std::sqrt(z * z + rho2);
        // phase relative to the axial ray, written free of cancellation
        double wavefront = (model == FocusModel::full)
                               ? rho2 / (r_sphere + f)   // sqrt(f^2+rho^2) - f
                               : rho2 / (2.0 * f);       // parabolic approximation
        double phi = k * (rho2 / (rz + z) - wavefront);
        double pol = (model == FocusModel::full) ? 0.5 * (1.0 + z / rz) : 1.0;
        double amp = std::exp(-rho2 / (w * w)) * (z / (rz * rz)) * pol * rho;
        return std::polar(amp, phi) * (f * sec2);
    };
    // seed the order ladder from the phase span of the integrand so the
    // doubling test starts near the resolved regime
    quadrature::AdaptiveOptions adaptive = opt.adaptive;
    double span = std::abs(phase_at(beam, model, z, theta_lim));
    int order = adaptive.initial_order;
    while (order < adaptive.max_order / 2 && order < span) order *= 2;
    adaptive.initial_order = order;
    return quadrature::integrate_complex(integrand, 0.0, theta_lim, adaptive);
}

// Locate the on-axis intensity maximum. The aberrated paraxial landscape can
// be multi-lobed, so a coarse scan with one zoom pass precedes the
// golden-section refinement.
double find_focus_z(const BeamGeometry& beam, FocusModel model,
                    const QuadratureOptions& opt) {
    if (model == FocusModel::full) return beam.focal_length;
    const double f = beam.focal_length;
    const double t_eff = std::tan(domain_theta_max(beam));
    double z_lo = f / (1.0 + 0.75 * t_eff * t_eff);
    double z_hi = 1.01 * f;
    const int n = opt.focus_scan_points;
    double best_z = f, best_v = -1.0;
    for (int pass = 0; pass < 2; ++pass) {
        double step = (z_hi - z_lo) / n;
        for (int i = 0; i <= n; ++i) {
            double z = z_lo + step * i;
            double v = std::abs(axial_amplitude(beam, model, z, opt));
            if (v > best_v) {
                best_v = v;
                best_z = z;
            }
        }
        z_lo = best_z - step;
        z_hi = best_z + step;
    }
    double a = z_lo, b = z_hi;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::abs(axial_amplitude(beam, model, x1, opt));
    double f2 = std::abs(axial_amplitude(beam, model, x2, opt));
    while (b - a > 2e-5 * f) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = std::abs(axial_amplitude(beam, model, x2, opt));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = std::abs(axial_amplitude(beam, model, x1, opt));
        }
    }
    return 0.5 * (a + b);
}

double input_field_amplitude(const BeamGeometry& beam) {
    // P = (c eps0 / 2) E_L^2 * pi w^2 / 2
    double denom = c::speed_of_light * c::eps0 * c::pi * beam.input_waist *
                   beam.input_waist / 4.0;
    return std::sqrt(beam.power / denom);
}

double p_sc_from_amplitude(const BeamGeometry& beam, std::complex<double> a_val) {
    double w = beam.input_waist;
    return 12.0 * std::norm(a_val) / (w * w);
}

}  // namespace

std::vector<AngularSample> lens_transform(const BeamGeometry& beam, int samples) {
    beam.validate();
    if (samples < 2) throw ConfigError("lens_transform: need at least 2 samples");
    std::vector<AngularSample> out;
    out.reserve(samples);
    const double th_max = beam.theta_max();
    const double u = beam.focusing_strength();
    for (int i = 0; i < samples; ++i) {
        double theta = th_max * i / (samples - 1);
        double t = std::tan(theta);
        double cth = std::cos(theta);
        AngularSample s;
        s.theta = theta;
        // flat-plane Gaussian mapped onto the sphere; sec(theta) keeps the
        // Debye integrand consistent with the lens-plane amplitudes
        s.amplitude = std::exp(-t * t / (u * u)) / cth;
        s.pol_co = 0.5 * (1.0 + cth);
        s.pol_z = std::sin(theta) / std::sqrt(2.0);
        s.pol_counter = 0.5 * (1.0 - cth);
        out.push_back(s);
    }
    return out;
}

double aperture_transmission(const BeamGeometry& beam) {
    beam.validate();
    double a = beam.aperture_radius();
    double w = beam.input_waist;
    return -std::expm1(-2.0 * a * a / (w * w));
}

double aperture_transmission_quadrature(const BeamGeometry& beam,
                                        const QuadratureOptions& opt) {
    beam.validate();
    const double w = beam.input_waist;
    auto integrand = [&](double rho) {
        return std::exp(-2.0 * rho * rho / (w * w)) * 4.0 * rho / (w * w);
    };
    return quadrature::integrate(integrand, 0.0, beam.aperture_radius(), opt.adaptive);
}

FocalField focal_field(const BeamGeometry& beam, FocusModel model,
                       const QuadratureOptions& opt) {
    beam.validate();
    FocalField field;
    field.model = model;
    field.power_in = beam.power;
    field.focal_length = beam.focal_length;
    field.focus_z = find_focus_z(beam, model, opt);
    std::complex<double> a_val = axial_amplitude(beam, model, field.focus_z, opt);
    const double k = beam.wavenumber();
    // Huygens prefactor k/i; e_counter and e_z vanish on axis
    field.e_co = std::complex<double>(0.0, -k) * a_val * input_field_amplitude(beam);
    field.e_counter = 0.0;
    field.e_z = 0.0;
    return field;
}

double focal_profile(const BeamGeometry& beam, FocusModel model, double z,
                     double r, const QuadratureOptions& opt) {
    beam.validate();
    const double f = beam.focal_length;
    const double w = beam.input_waist;
    const double k = beam.wavenumber();
    auto integrand = [&](double theta) -> std::complex<double> {
        const double t = std::tan(theta);
        const double sec2 = 1.0 + t * t;
        const double rho = f * t;
        const double rho2 = rho * rho;
        const double r_sphere = std::sqrt(f * f + rho2);
        const double rz = std::sqrt(z * z + rho2);
        double wavefront = (model == FocusModel::full) ? rho2 / (r_sphere + f)
                                                       : rho2 / (2.0 * f);
        double phi = k * (rho2 / (rz + z) - wavefront);
        double pol = (model == FocusModel::full) ? 0.5 * (1.0 + z / rz) : 1.0;
        double amp = std::exp(-rho2 / (w * w)) * (z / (rz * rz)) * pol * rho;
        amp *= std::cyl_bessel_j(0, k * r * rho / rz);
        return std::polar(amp, phi) * (f * sec2);
    };
    std::complex<double> a_val = quadrature::integrate_complex(
        integrand, 0.0, domain_theta_max(beam), opt.adaptive);
    return k * std::abs(a_val) * input_field_amplitude(beam);
}

double focal_waist_numeric(const BeamGeometry& beam, FocusModel model,
                           const QuadratureOptions& opt) {
    beam.validate();
    double z = find_focus_z(beam, model, opt);
    double e0 = focal_profile(beam, model, z, 0.0, opt);
    double target = e0 / std::exp(1.0);
    // bracket the 1/e radius starting from the Gaussian-optics estimate
    double guess = paraxial_waist(beam);
    double lo = 0.05 * guess, hi = guess;
    while (focal_profile(beam, model, z, hi, opt) > target) hi *= 1.5;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (focal_profile(beam, model, z, mid, opt) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-5 * guess) break;
    }
    return 0.5 * (lo + hi);
}

double paraxial_waist(const BeamGeometry& beam) {
    beam.validate();
    return beam.wavelength * beam.focal_length / (c::pi * beam.input_waist);
}

ScatteringResult scattering_probability(const BeamGeometry& beam, FocusModel model,
                                        const QuadratureOptions& opt) {
    beam.validate();
    ScatteringResult result;
    result.model = model;
    result.geometry = beam;
    double z = find_focus_z(beam, model, opt);
    result.p_sc = p_sc_from_amplitude(beam, axial_amplitude(beam, model, z, opt));
    return result;
}

namespace {

// Maximize P_sc over the input waist at fixed aperture (golden section in
// log u; the curve is single-peaked).
double best_p_sc_over_u(const BeamGeometry& beam_template, FocusModel model,
                        const QuadratureOptions& opt, double* u_best_out) {
    auto eval = [&](double log_u) {
        BeamGeometry b = beam_template;
        b.input_waist = std::exp(log_u) * b.focal_length;
        return scattering_probability(b, model, opt).p_sc;
    };
    double a = std::log(0.05), b = std::log(4.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    while (b - a > 2e-3) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = eval(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = eval(x1);
        }
    }
    double u = std::exp(0.5 * (a + b));
    if (u_best_out) *u_best_out = u;
    BeamGeometry bb = beam_template;
    bb.input_waist = u * bb.focal_length;
    return scattering_probability(bb, model, opt).p_sc;
}

}  // namespace

std::vector<ScanPoint> scan_focusing(const BeamGeometry& beam_template,
                                     ScanVariable variable, double lo, double hi,
                                     int n, FocusModel model,
                                     const QuadratureOptions& opt) {
    if (n < 0) throw ConfigError("scan_focusing: point count must be >= 0");
    std::vector<ScanPoint> table;
    table.reserve(n);
    for (int i = 0; i < n; ++i) {
        double x = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1);
        ScanPoint pt;
        try {
            if (variable == ScanVariable::focusing_strength) {
                BeamGeometry b = beam_template;
                b.input_waist = x * b.focal_length;
                pt.u = x;
                pt.na = b.aperture_na;
                pt.p_sc = scattering_probability(b, model, opt).p_sc;
            } else {
                BeamGeometry b = beam_template;
                b.aperture_na = x;
                pt.na = x;
                pt.p_sc = best_p_sc_over_u(b, model, opt, &pt.u);
            }
        } catch (const QuadratureError& err) {
            std::ostringstream msg;
            msg << "scan point " << i << " (value " << x << "): " << err.what();
            throw QuadratureError(msg.str());
        }
        table.push_back(pt);
    }
    return table;
}

}  // namespace atomlens::focalfield
