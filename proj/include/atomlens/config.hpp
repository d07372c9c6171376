#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "atomlens/correlation.hpp"
#include "atomlens/focalfield.hpp"
#include "atomlens/sequence.hpp"
#include "atomlens/spectroscopy.hpp"
#include "atomlens/stark.hpp"

namespace atomlens::config {

// Flat run configuration shared by every CLI subcommand. Sections are parsed
// and checked against the module invariants before any computation starts.
// File units are lab units (nm, mm, um, mW, MHz); values are converted to SI
// on load.
struct RunConfig {
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    std::string format = "dsv";
    std::string config_hash;  // FNV-1a of the raw file
    std::string base_dir;     // directory of the config file, for relative paths

    std::optional<focalfield::BeamGeometry> beam;
    std::optional<stark::FortParams> fort;
    std::optional<double> fort_depth_mhz;  // calibrate power to this trap depth
    std::optional<std::string> lines_file;
    std::optional<correlation::TwoLevelDrive> drive;
    std::optional<sequence::SequenceConfig> sequence_cfg;
    std::optional<spectroscopy::LorentzianParams> line_shape;
    std::optional<double> spectrum_sigma_t;
    std::optional<std::string> loss_chain_file;

    static RunConfig load(const std::string& path);

    // resolve a path from the config relative to the config file location
    std::string resolve(const std::string& path) const;
};

}  // namespace atomlens::config
