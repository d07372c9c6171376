#include "atomlens/config.hpp"

#include <filesystem>

#include <json.hpp>

#include "atomlens/errors.hpp"
#include "atomlens/table.hpp"

namespace atomlens::config {

using nlohmann::json;

namespace {

double require(const json& section, const char* key, const std::string& where) {
    if (!section.contains(key))
        throw ConfigError("config: missing key '" + std::string(key) + "' in " + where);
    if (!section[key].is_number())
        throw ConfigError("config: '" + std::string(key) + "' in " + where +
                          " must be a number");
    return section[key].get<double>();
}

double value_or(const json& section, const char* key, double fallback) {
    if (!section.contains(key)) return fallback;
    return section[key].get<double>();
}

focalfield::Handedness parse_handedness(const json& section, const std::string& where) {
    std::string h = section.value("handedness", "sigma+");
    if (h == "sigma+" || h == "right") return focalfield::Handedness::sigma_plus;
    if (h == "sigma-" || h == "left") return focalfield::Handedness::sigma_minus;
    throw ConfigError("config: bad handedness '" + h + "' in " + where +
                      " (expected sigma+ or sigma-)");
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::string raw;
    try {
        raw = table::read_file(path);
    } catch (const ConfigError&) {
        throw ConfigError("config file not found: " + path);
    }
    json root;
    try {
        root = json::parse(raw);
    } catch (const json::parse_error& err) {
        throw ConfigError("config parse error in " + path + ": " + err.what());
    }

    RunConfig cfg;
    cfg.config_hash = table::fnv1a_hex(raw);
    cfg.base_dir = std::filesystem::path(path).parent_path().string();
    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned())
            throw ConfigError("config: seed must be a 64-bit unsigned integer");
        cfg.seed = root["seed"].get<std::uint64_t>();
    }
    cfg.output_dir = root.value("output_dir", ".");
    cfg.format = root.value("format", "dsv");
    table::parse_format(cfg.format);  // validate early

    if (root.contains("beam")) {
        const json& b = root["beam"];
        focalfield::BeamGeometry beam;
        beam.wavelength = require(b, "wavelength_nm", "beam") * 1e-9;
        beam.input_waist = require(b, "input_waist_mm", "beam") * 1e-3;
        beam.focal_length = require(b, "focal_length_mm", "beam") * 1e-3;
        beam.aperture_na = require(b, "aperture_na", "beam");
        beam.power = value_or(b, "power_mw", 1.0) * 1e-3;
        beam.handedness = parse_handedness(b, "beam");
        beam.validate();
        cfg.beam = beam;
    }
    if (root.contains("fort")) {
        const json& f = root["fort"];
        stark::FortParams fort;
        fort.wavelength = require(f, "wavelength_nm", "fort") * 1e-9;
        fort.waist = require(f, "waist_um", "fort") * 1e-6;
        fort.handedness = parse_handedness(f, "fort");
        bool has_power = f.contains("power_mw");
        bool has_depth = f.contains("depth_mhz");
        if (has_power == has_depth)
            throw ConfigError("config: fort needs exactly one of power_mw or depth_mhz");
        if (has_power) fort.power = require(f, "power_mw", "fort") * 1e-3;
        if (has_depth) {
            cfg.fort_depth_mhz = require(f, "depth_mhz", "fort");
            if (!(*cfg.fort_depth_mhz > 0.0))
                throw ConfigError("config: fort depth_mhz must be > 0");
        }
        fort.validate();
        cfg.fort = fort;
    }
    if (root.contains("lines_file")) cfg.lines_file = root["lines_file"].get<std::string>();
    if (root.contains("drive")) {
        const json& d = root["drive"];
        correlation::TwoLevelDrive drive;
        drive.rabi_mhz = require(d, "rabi_mhz", "drive");
        if (d.contains("lifetime_ns"))
            drive.gamma_mhz = 1e3 / (2.0 * 3.14159265358979323846 *
                                     require(d, "lifetime_ns", "drive"));
        else
            drive.gamma_mhz = require(d, "gamma_mhz", "drive");
        drive.detuning_mhz = value_or(d, "detuning_mhz", 0.0);
        drive.background_rate = value_or(d, "background_rate", 0.0);
        drive.split_ratio = value_or(d, "split_ratio", 0.5);
        drive.validate();
        cfg.drive = drive;
    }
    if (root.contains("sequence")) {
        const json& s = root["sequence"];
        sequence::SequenceConfig seq;
        seq.t_true = value_or(s, "t_true", 1.0);
        seq.rate_no_atom = require(s, "rate_no_atom", "sequence");
        seq.tau_m_min = value_or(s, "tau_m_min_ms", 130.0) * 1e-3;
        seq.tau_m_max = value_or(s, "tau_m_max_ms", 140.0) * 1e-3;
        seq.tau_r = value_or(s, "tau_r_s", 2.0);
        seq.mean_dwell = value_or(s, "mean_dwell_s", 1.5);
        seq.events_per_point = static_cast<int>(value_or(s, "events_per_point", 100));
        seq.validate();
        cfg.sequence_cfg = seq;
    }
    if (root.contains("spectrum")) {
        const json& sp = root["spectrum"];
        spectroscopy::LorentzianParams line;
        line.p_sc_max = require(sp, "p_sc_max", "spectrum");
        line.fwhm_mhz = require(sp, "fwhm_mhz", "spectrum");
        line.center_mhz = value_or(sp, "center_mhz", 0.0);
        line.alpha = value_or(sp, "alpha", 0.0);
        cfg.line_shape = line;
        if (sp.contains("sigma_t")) cfg.spectrum_sigma_t = sp["sigma_t"].get<double>();
        // validated by transmission_model on first use; check eagerly too
        spectroscopy::transmission_model({0.0}, line);
    }
    if (root.contains("loss_chain_file"))
        cfg.loss_chain_file = root["loss_chain_file"].get<std::string>();

    // referenced files must exist before any computation starts
    for (const auto& ref : {cfg.lines_file, cfg.loss_chain_file}) {
        if (ref && !std::filesystem::exists(cfg.resolve(*ref)))
            throw ConfigError("config references a missing file: " + cfg.resolve(*ref));
    }
    return cfg;
}

std::string RunConfig::resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace atomlens::config
