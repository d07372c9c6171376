#pragma once

#include <map>
#include <string>
#include <vector>

#include "atomlens/focalfield.hpp"

namespace atomlens::stark {

using focalfield::Handedness;

// One electric-dipole transition record. lower/upper are energy-ordered level
// labels; dipole_au is the reduced matrix element <J_lower||d||J_upper> in
// atomic units (symmetric Racah convention, as tabulated by relativistic
// many-body calculations).
struct LineRecord {
    std::string lower;
    std::string upper;
    double j_lower = 0.0;
    double j_upper = 0.0;
    double wavelength_nm = 0.0;
    double linewidth_mhz = 0.0;
    double dipole_au = 0.0;
    std::string provenance;
};

class LineTable {
  public:
    static LineTable load(const std::string& path);
    static LineTable from_records(std::vector<LineRecord> records);

    const std::vector<LineRecord>& records() const { return records_; }

    // all lines with the given level on either side
    std::vector<LineRecord> lines_for(const std::string& level) const;

  private:
    std::vector<LineRecord> records_;
};

// Far-off-resonant dipole trap beam at its focus.
struct FortParams {
    double wavelength = 980e-9;  // m
    double waist = 1.4e-6;       // m
    double power = 0.0;          // W
    Handedness handedness = Handedness::sigma_plus;

    double peak_intensity() const;  // 2P/(pi w^2), W/m^2
    void validate() const;
};

struct LevelShifts {
    std::string level;
    int f = 0;
    std::map<int, double> shift_mhz;  // m_F -> shift (negative = lowered)

    double mean() const;
    double spread() const;  // max - min over m_F
};

// Known levels of the D2 cycling system; the table may contain lines for
// other levels but shifts are computed for these two.
inline constexpr const char* level_ground = "5S1/2";   // F = 2
inline constexpr const char* level_excited = "5P3/2";  // F' = 3

// AC-Stark shifts of all m_F sublevels from second-order perturbation theory
// over the line table, with co- and counter-rotating terms retained. The
// shift is evaluated in the fine-structure basis (the trap detuning is large
// compared to hyperfine splittings) and projected onto |F, m_F>.
LevelShifts sublevel_shifts(const FortParams& fort, const LineTable& lines,
                            const std::string& level, int f);

// -(mean F=2 ground shift); positive for a trapping configuration.
double trap_depth_mhz(const FortParams& fort, const LineTable& lines);

// Power that produces the requested trap depth (shifts are linear in power).
double calibrate_power(const FortParams& fort_template, const LineTable& lines,
                       double depth_mhz);

// Resonance offset of the stretched cycling transition probed with sigma+ or
// sigma- light: shift(|e+->) - shift(|g+->) and the mirror pair.
double probe_resonance_offset_mhz(const FortParams& fort, const LineTable& lines,
                                  Handedness probe);

}  // namespace atomlens::stark
