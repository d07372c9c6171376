// Python bindings for the main operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "atomlens/errors.hpp"
#include "atomlens/correlation.hpp"
#include "atomlens/focalfield.hpp"
#include "atomlens/sequence.hpp"
#include "atomlens/spectroscopy.hpp"
#include "atomlens/stark.hpp"

namespace py = pybind11;
using namespace atomlens;
namespace ff = atomlens::focalfield;

namespace {

ff::Handedness parse_handedness(const std::string& h) {
    if (h == "sigma+") return ff::Handedness::sigma_plus;
    if (h == "sigma-") return ff::Handedness::sigma_minus;
    throw ConfigError("handedness must be 'sigma+' or 'sigma-'");
}

ff::FocusModel parse_model(const std::string& m) {
    if (m == "paraxial") return ff::FocusModel::paraxial;
    if (m == "full") return ff::FocusModel::full;
    throw ConfigError("model must be 'paraxial' or 'full'");
}

}  // namespace

PYBIND11_MODULE(_atomlens, m) {
    m.doc() = "single-atom free-space photon coupling toolkit";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<QuadratureError>(m, "QuadratureError", PyExc_ArithmeticError);
    py::register_exception<FitError>(m, "FitError", PyExc_ArithmeticError);

    // ------------------------------------------------------------ beams ----
    py::class_<ff::BeamGeometry>(m, "BeamGeometry")
        .def(py::init([](double wavelength, double input_waist, double focal_length,
                         double aperture_na, double power, const std::string& handedness) {
                 ff::BeamGeometry b;
                 b.wavelength = wavelength;
                 b.input_waist = input_waist;
                 b.focal_length = focal_length;
                 b.aperture_na = aperture_na;
                 b.power = power;
                 b.handedness = parse_handedness(handedness);
                 b.validate();
                 return b;
             }),
             py::arg("wavelength"), py::arg("input_waist"), py::arg("focal_length"),
             py::arg("aperture_na"), py::arg("power") = 1e-6,
             py::arg("handedness") = "sigma+")
        .def_readwrite("wavelength", &ff::BeamGeometry::wavelength)
        .def_readwrite("input_waist", &ff::BeamGeometry::input_waist)
        .def_readwrite("focal_length", &ff::BeamGeometry::focal_length)
        .def_readwrite("aperture_na", &ff::BeamGeometry::aperture_na)
        .def_readwrite("power", &ff::BeamGeometry::power)
        .def_property_readonly("u", &ff::BeamGeometry::focusing_strength);

    py::class_<ff::FocalField>(m, "FocalField")
        .def_readonly("e_co", &ff::FocalField::e_co)
        .def_readonly("e_counter", &ff::FocalField::e_counter)
        .def_readonly("e_z", &ff::FocalField::e_z)
        .def_readonly("focus_z", &ff::FocalField::focus_z)
        .def_readonly("power_in", &ff::FocalField::power_in);

    m.def(
        "focal_field",
        [](const ff::BeamGeometry& b, const std::string& model) {
            return ff::focal_field(b, parse_model(model));
        },
        py::arg("beam"), py::arg("model") = "full");
    m.def(
        "scattering_probability",
        [](const ff::BeamGeometry& b, const std::string& model) {
            return ff::scattering_probability(b, parse_model(model)).p_sc;
        },
        py::arg("beam"), py::arg("model") = "full");
    m.def("paraxial_waist", &ff::paraxial_waist, py::arg("beam"));
    m.def("aperture_transmission", &ff::aperture_transmission, py::arg("beam"));
    m.def(
        "scan_focusing",
        [](const ff::BeamGeometry& b, const std::string& variable, double lo, double hi,
           int n, const std::string& model) {
            auto var = (variable == "u") ? ff::ScanVariable::focusing_strength
                                         : ff::ScanVariable::numerical_aperture;
            if (variable != "u" && variable != "na")
                throw ConfigError("scan variable must be 'u' or 'na'");
            auto pts = ff::scan_focusing(b, var, lo, hi, n, parse_model(model));
            std::vector<std::tuple<double, double, double>> out;
            out.reserve(pts.size());
            for (const auto& p : pts) out.emplace_back(p.u, p.na, p.p_sc);
            return out;
        },
        py::arg("beam"), py::arg("variable"), py::arg("lo"), py::arg("hi"), py::arg("n"),
        py::arg("model") = "full");

    // ------------------------------------------------------------ stark ----
    py::class_<stark::LineTable>(m, "LineTable")
        .def_static("load", &stark::LineTable::load, py::arg("path"))
        .def_property_readonly("size",
                               [](const stark::LineTable& t) { return t.records().size(); });

    py::class_<stark::FortParams>(m, "FortParams")
        .def(py::init([](double wavelength, double waist, double power,
                         const std::string& handedness) {
                 stark::FortParams f;
                 f.wavelength = wavelength;
                 f.waist = waist;
                 f.power = power;
                 f.handedness = parse_handedness(handedness);
                 f.validate();
                 return f;
             }),
             py::arg("wavelength") = 980e-9, py::arg("waist") = 1.4e-6,
             py::arg("power") = 0.0, py::arg("handedness") = "sigma+")
        .def_readwrite("wavelength", &stark::FortParams::wavelength)
        .def_readwrite("waist", &stark::FortParams::waist)
        .def_readwrite("power", &stark::FortParams::power);

    m.def(
        "sublevel_shifts",
        [](const stark::FortParams& fort, const stark::LineTable& lines,
           const std::string& level, int f) {
            return stark::sublevel_shifts(fort, lines, level, f).shift_mhz;
        },
        py::arg("fort"), py::arg("lines"), py::arg("level"), py::arg("f"));
    m.def("trap_depth_mhz", &stark::trap_depth_mhz, py::arg("fort"), py::arg("lines"));
    m.def("calibrate_power", &stark::calibrate_power, py::arg("fort"), py::arg("lines"),
          py::arg("depth_mhz"));
    m.def(
        "probe_resonance_offset_mhz",
        [](const stark::FortParams& fort, const stark::LineTable& lines,
           const std::string& probe) {
            return stark::probe_resonance_offset_mhz(fort, lines, parse_handedness(probe));
        },
        py::arg("fort"), py::arg("lines"), py::arg("probe"));

    // ------------------------------------------------------ spectroscopy ----
    py::class_<spectroscopy::SpectrumPoint>(m, "SpectrumPoint")
        .def(py::init([](double d, double t, double s) {
                 return spectroscopy::SpectrumPoint{d, t, s};
             }),
             py::arg("detuning_mhz"), py::arg("transmission"), py::arg("sigma"))
        .def_readonly("detuning_mhz", &spectroscopy::SpectrumPoint::detuning_mhz)
        .def_readonly("transmission", &spectroscopy::SpectrumPoint::transmission)
        .def_readonly("sigma", &spectroscopy::SpectrumPoint::sigma);

    py::class_<spectroscopy::LorentzianFit>(m, "LorentzianFit")
        .def_readonly("center_mhz", &spectroscopy::LorentzianFit::center_mhz)
        .def_readonly("fwhm_mhz", &spectroscopy::LorentzianFit::fwhm_mhz)
        .def_readonly("eps_max", &spectroscopy::LorentzianFit::eps_max)
        .def_readonly("baseline", &spectroscopy::LorentzianFit::baseline)
        .def_readonly("center_sigma", &spectroscopy::LorentzianFit::center_sigma)
        .def_readonly("fwhm_sigma", &spectroscopy::LorentzianFit::fwhm_sigma)
        .def_readonly("eps_sigma", &spectroscopy::LorentzianFit::eps_sigma)
        .def_readonly("baseline_sigma", &spectroscopy::LorentzianFit::baseline_sigma);

    m.def(
        "transmission_model",
        [](const std::vector<double>& grid, double p_sc_max, double fwhm_mhz,
           double center_mhz, double alpha) {
            spectroscopy::LorentzianParams p{p_sc_max, fwhm_mhz, center_mhz, alpha};
            return spectroscopy::transmission_model(grid, p);
        },
        py::arg("detuning_mhz"), py::arg("p_sc_max"), py::arg("fwhm_mhz"),
        py::arg("center_mhz") = 0.0, py::arg("alpha") = 0.0);
    m.def("extinction_to_scattering", &spectroscopy::extinction_to_scattering,
          py::arg("eps"), py::arg("alpha"));
    m.def("fit_lorentzian", &spectroscopy::fit_lorentzian, py::arg("points"));
    m.def(
        "synthesize_spectrum",
        [](const std::vector<double>& grid, double p_sc_max, double fwhm_mhz,
           double center_mhz, double alpha, double sigma_t, std::uint64_t seed) {
            spectroscopy::LorentzianParams p{p_sc_max, fwhm_mhz, center_mhz, alpha};
            RandomStream rng(seed);
            return spectroscopy::synthesize_spectrum(grid, p, sigma_t, rng).points;
        },
        py::arg("detuning_mhz"), py::arg("p_sc_max"), py::arg("fwhm_mhz"),
        py::arg("center_mhz"), py::arg("alpha"), py::arg("sigma_t"), py::arg("seed"));
    m.def(
        "chain_transmission",
        [](const std::vector<std::pair<std::string, double>>& chain) {
            spectroscopy::LossChain c;
            for (const auto& [name, t] : chain) c.push_back({name, t});
            return spectroscopy::chain_transmission(c);
        },
        py::arg("chain"));

    // ------------------------------------------------------- correlation ----
    py::class_<correlation::TwoLevelDrive>(m, "TwoLevelDrive")
        .def(py::init([](double rabi_mhz, double gamma_mhz, double detuning_mhz,
                         double background_rate, double split_ratio) {
                 correlation::TwoLevelDrive d;
                 d.rabi_mhz = rabi_mhz;
                 d.gamma_mhz = gamma_mhz;
                 d.detuning_mhz = detuning_mhz;
                 d.background_rate = background_rate;
                 d.split_ratio = split_ratio;
                 d.validate();
                 return d;
             }),
             py::arg("rabi_mhz"), py::arg("gamma_mhz"), py::arg("detuning_mhz") = 0.0,
             py::arg("background_rate") = 0.0, py::arg("split_ratio") = 0.5);

    m.def(
        "g2_closed_form",
        [](const correlation::TwoLevelDrive& d, const std::vector<double>& tau) {
            return correlation::g2_closed_form(d, tau);
        },
        py::arg("drive"), py::arg("tau_s"));
    m.def("g2_bloch", &correlation::g2_bloch_numeric, py::arg("drive"), py::arg("tau_s"),
          py::arg("dt_s") = 1e-11);
    m.def(
        "simulate_streams",
        [](const correlation::TwoLevelDrive& d, double duration, std::uint64_t seed) {
            auto [d1, d2] = correlation::simulate_streams(d, duration, seed);
            return std::make_pair(d1.timestamps, d2.timestamps);
        },
        py::arg("drive"), py::arg("duration_s"), py::arg("seed"));
    m.def(
        "histogram_g2",
        [](const std::vector<double>& t1, const std::vector<double>& t2, double duration,
           double bin_ns, double window_ns) {
            correlation::PhotonStream d1{"D1", t1, duration};
            correlation::PhotonStream d2{"D2", t2, duration};
            auto h = correlation::histogram_g2(d1, d2, bin_ns, window_ns);
            return std::make_tuple(h.tau_ns, h.g2, h.sigma);
        },
        py::arg("timestamps_d1"), py::arg("timestamps_d2"), py::arg("duration_s"),
        py::arg("bin_ns"), py::arg("window_ns"));

    // ---------------------------------------------------------- sequence ----
    py::class_<sequence::TransmissionEstimate>(m, "TransmissionEstimate")
        .def_readonly("value", &sequence::TransmissionEstimate::value)
        .def_readonly("weight", &sequence::TransmissionEstimate::weight)
        .def_readonly("sigma", &sequence::TransmissionEstimate::sigma);

    py::class_<sequence::SequenceConfig>(m, "SequenceConfig")
        .def(py::init([](double t_true, double rate_no_atom, int events_per_point,
                         std::uint64_t seed) {
                 sequence::SequenceConfig c;
                 c.t_true = t_true;
                 c.rate_no_atom = rate_no_atom;
                 c.events_per_point = events_per_point;
                 c.seed = seed;
                 c.validate();
                 return c;
             }),
             py::arg("t_true"), py::arg("rate_no_atom"), py::arg("events_per_point") = 100,
             py::arg("seed") = 0);

    m.def("simulate_point", &sequence::simulate_point, py::arg("config"),
          py::arg("substream") = 0);
    m.def(
        "sequence_spectrum",
        [](const sequence::SequenceConfig& c, const std::vector<double>& grid,
           double p_sc_max, double fwhm_mhz, double center_mhz, double alpha) {
            spectroscopy::LorentzianParams p{p_sc_max, fwhm_mhz, center_mhz, alpha};
            return sequence::synthesize_spectrum(c, grid, p);
        },
        py::arg("config"), py::arg("detuning_mhz"), py::arg("p_sc_max"),
        py::arg("fwhm_mhz"), py::arg("center_mhz") = 0.0, py::arg("alpha") = 0.0);
}
