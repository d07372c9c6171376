#pragma once

#include <complex>
#include <vector>

#include "atomlens/quadrature.hpp"

namespace atomlens::focalfield {

enum class Handedness { sigma_plus, sigma_minus };

enum class FocusModel {
    paraxial,  // parabolic wavefront after the lens, polarization unchanged
    full       // spherical wavefront, polarization rotated onto the converging sphere
};

// Collimated Gaussian probe beam incident on the focusing lens.
struct BeamGeometry {
    double wavelength = 0.0;    // m
    double input_waist = 0.0;   // m, 1/e^2 intensity radius of the field at the lens
    double focal_length = 0.0;  // m
    double aperture_na = 0.0;   // sin(theta_max), 0 < NA < 1
    double power = 0.0;         // W
    Handedness handedness = Handedness::sigma_plus;

    double focusing_strength() const { return input_waist / focal_length; }  // u = w_L/f
    double theta_max() const;          // arcsin(NA)
    double aperture_radius() const;    // f * tan(theta_max), in the lens plane
    double wavenumber() const;

    // throws ConfigError if any invariant is violated
    void validate() const;
};

// Complex field components at the beam focus in the circular basis.
// e_co rotates with the driven dipole transition, e_counter against it.
// On the optical axis e_counter and e_z vanish by azimuthal symmetry.
struct FocalField {
    std::complex<double> e_co{};       // V/m
    std::complex<double> e_counter{};  // V/m
    std::complex<double> e_z{};        // V/m
    FocusModel model = FocusModel::full;
    double power_in = 0.0;     // W, normalization record
    double focus_z = 0.0;      // m, axial location of the field maximum
    double focal_length = 0.0; // m, geometry echo
};

struct ScatteringResult {
    double p_sc = 0.0;  // scattered power / input power
    FocusModel model = FocusModel::full;
    BeamGeometry geometry;
};

// One sample of the after-lens angular distribution on the converging sphere.
// amplitude is relative to the on-axis input field; the pol_* weights give the
// fractions feeding each circular component at the focus.
struct AngularSample {
    double theta = 0.0;
    double amplitude = 0.0;
    double pol_co = 0.0;
    double pol_z = 0.0;
    double pol_counter = 0.0;
};

struct ScanPoint {
    double u = 0.0;
    double na = 0.0;
    double p_sc = 0.0;
};

struct QuadratureOptions {
    quadrature::AdaptiveOptions adaptive{};
    int focus_scan_points = 64;  // coarse axial samples per refinement pass
};

// Angular amplitude distribution produced by the lens for theta in
// [0, theta_max], sampled on a uniform grid. The samples describe the
// converging wave of the full model; in the weak-focusing limit the
// amplitude scaling tends to 1 and the polarization rotation to identity.
std::vector<AngularSample> lens_transform(const BeamGeometry& beam, int samples = 256);

// Fraction of the input power passing the aperture. For a Gaussian beam this
// equals 1 - exp(-2 a^2 / w_L^2) with a the aperture radius; the lens itself
// is lossless (pure phase and polarization rotation), so this is also the
// power arriving at the focal plane.
double aperture_transmission(const BeamGeometry& beam);
double aperture_transmission_quadrature(const BeamGeometry& beam,
                                        const QuadratureOptions& opt = {});

// Field at the beam focus. The full model evaluates at the geometric focus;
// the paraxial model carries spherical aberration (the parabolic wavefront is
// not a sphere), so its focus is located by maximizing the on-axis intensity.
FocalField focal_field(const BeamGeometry& beam, FocusModel model,
                       const QuadratureOptions& opt = {});

// |co-rotating field| at transverse radius r in the plane z = focus_z,
// relative to the on-axis input field amplitude.
double focal_profile(const BeamGeometry& beam, FocusModel model, double z,
                     double r, const QuadratureOptions& opt = {});

// 1/e field radius of the co-rotating component in the focal plane.
double focal_waist_numeric(const BeamGeometry& beam, FocusModel model,
                           const QuadratureOptions& opt = {});

// Gaussian-optics focal waist lambda*f/(pi*w_L) of the unaberrated beam.
double paraxial_waist(const BeamGeometry& beam);

// Resonant scattering probability of a stationary two-level atom at the
// focus: P_sc = sigma * I_co / P_in with sigma = 3 lambda^2 / (2 pi).
ScatteringResult scattering_probability(const BeamGeometry& beam, FocusModel model,
                                        const QuadratureOptions& opt = {});

// Scattering probability scan. Scan in u varies the input waist at fixed
// aperture; scan in NA varies the aperture and reports, per point, the waist
// that maximizes P_sc (the attainable coupling of a lens with that NA).
enum class ScanVariable { focusing_strength, numerical_aperture };

std::vector<ScanPoint> scan_focusing(const BeamGeometry& beam_template,
                                     ScanVariable variable, double lo, double hi,
                                     int n, FocusModel model,
                                     const QuadratureOptions& opt = {});

}  // namespace atomlens::focalfield
