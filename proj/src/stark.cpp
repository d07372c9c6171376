// AC-Stark shifts of the 87Rb 5S1/2 F=2 and 5P3/2 F'=3 sublevels in a
// circularly polarized dipole trap.
//
// The shift of fine-structure sublevel |J m_J> in a field
// E = Re[E0 u e^{-i w t}] with pure circular polarization q = +/-1 is the
// plain second-order sum over the line table,
//
//   dE(m_J) = -(E0^2/4) sum_b [ |<b, m_J+q|d_q|J m_J>|^2 / (hbar (w_b - w))
//                             + |<b, m_J-q|d_-q|J m_J>|^2 / (hbar (w_b + w)) ],
//
// where w_b is signed (negative for partners below the level). Matrix
// elements come from tabulated reduced elements via the Wigner-Eckart
// theorem, |<b m_b|d_q|a m_a>|^2 = d^2 * 3j(J_b 1 J_a; -m_b q m_a)^2.
// Because q is fixed, the effective operator is diagonal in m_J, and the
// hyperfine projection is a Clebsch-Gordan weighted average. J=1/2 levels
// carry no rank-2 part, so the ground manifold splits only through the
// vector term; the 5P3/2 manifold picks up the full tensor structure.

#include "atomlens/stark.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "atomlens/angular.hpp"
#include "atomlens/constants.hpp"
#include "atomlens/errors.hpp"

namespace atomlens::stark {

namespace c = atomlens::constants;
using angular::clebsch_gordan;
using angular::wigner3j;

namespace {

constexpr double nuclear_spin = 1.5;  // 87Rb

double level_j(const std::string& level, const LineTable& lines) {
    for (const LineRecord& rec : lines.records()) {
        if (rec.lower == level) return rec.j_lower;
        if (rec.upper == level) return rec.j_upper;
    }
    throw ConfigError("line table has no entries for level " + level);
}

// squared dipole matrix element in SI units
double coupling_sq(const LineRecord& rec, bool level_is_lower, double m_level,
                   double m_partner, double q) {
    double d = rec.dipole_au * c::dipole_au;
    double w3;
    if (level_is_lower)
        w3 = wigner3j(rec.j_upper, 1.0, rec.j_lower, -m_partner, q, m_level);
    else
        w3 = wigner3j(rec.j_lower, 1.0, rec.j_upper, -m_partner, q, m_level);
    return d * d * w3 * w3;
}

std::map<double, double> fine_structure_shifts(const FortParams& fort,
                                               const LineTable& lines,
                                               const std::string& level) {
    const auto level_lines = lines.lines_for(level);
    if (level_lines.empty())
        throw ConfigError("line table has no entries for level " + level);

    const double omega = c::two_pi * c::speed_of_light / fort.wavelength;
    const double e0_sq = 2.0 * fort.peak_intensity() / (c::eps0 * c::speed_of_light);
    const double q = (fort.handedness == Handedness::sigma_plus) ? 1.0 : -1.0;
    const double j = level_j(level, lines);

    std::map<double, double> shifts;
    for (double mj = -j; mj <= j + 1e-9; mj += 1.0) {
        double total = 0.0;
        for (const LineRecord& rec : level_lines) {
            const bool is_lower = (rec.lower == level);
            const double j_partner = is_lower ? rec.j_upper : rec.j_lower;
            const double omega_line = c::two_pi * c::speed_of_light /
                                      (rec.wavelength_nm * 1e-9);
            if (std::abs(omega_line - omega) < 1e-6 * omega_line)
                throw ConfigError("trap light is resonant with line " + rec.lower +
                                  " - " + rec.upper);
            const double omega_ba = is_lower ? omega_line : -omega_line;
            // co-rotating couples through q, counter-rotating through -q
            const double qq[2] = {q, -q};
            const double den[2] = {omega_ba - omega, omega_ba + omega};
            for (int term = 0; term < 2; ++term) {
                double mb = mj + qq[term];
                if (std::abs(mb) > j_partner + 1e-9) continue;
                double m2 = coupling_sq(rec, is_lower, mj, mb, qq[term]);
                total += -(e0_sq / 4.0) * m2 / (c::hbar * den[term]);
            }
        }
        shifts[mj] = total;
    }
    return shifts;
}

}  // namespace

double FortParams::peak_intensity() const {
    return 2.0 * power / (c::pi * waist * waist);
}

void FortParams::validate() const {
    if (!(wavelength > 0.0)) throw ConfigError("fort: wavelength must be > 0");
    if (!(waist > 0.0)) throw ConfigError("fort: waist must be > 0");
    if (!(power >= 0.0)) throw ConfigError("fort: power must be >= 0");
}

LineTable LineTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open line table: " + path);
    std::vector<LineRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        LineRecord rec;
        if (!(row >> rec.lower)) continue;  // blank line
        if (!(row >> rec.upper >> rec.j_lower >> rec.j_upper >> rec.wavelength_nm >>
              rec.linewidth_mhz >> rec.dipole_au >> rec.provenance)) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 8 fields "
                << "(lower upper J_lower J_upper lambda_nm gamma_mhz d_au provenance)";
            throw ConfigError(msg.str());
        }
        records.push_back(rec);
    }
    return from_records(std::move(records));
}

LineTable LineTable::from_records(std::vector<LineRecord> records) {
    for (const LineRecord& rec : records) {
        if (!(rec.wavelength_nm > 0.0))
            throw ConfigError("line " + rec.lower + "-" + rec.upper +
                              ": wavelength must be > 0");
        if (!(rec.linewidth_mhz > 0.0))
            throw ConfigError("line " + rec.lower + "-" + rec.upper +
                              ": linewidth must be > 0");
        if (!(rec.dipole_au > 0.0))
            throw ConfigError("line " + rec.lower + "-" + rec.upper +
                              ": dipole element must be > 0");
        if (rec.j_lower < 0.0 || rec.j_upper < 0.0)
            throw ConfigError("line " + rec.lower + "-" + rec.upper + ": bad J");
    }
    LineTable table;
    table.records_ = std::move(records);
    return table;
}

std::vector<LineRecord> LineTable::lines_for(const std::string& level) const {
    std::vector<LineRecord> out;
    for (const LineRecord& rec : records_)
        if (rec.lower == level || rec.upper == level) out.push_back(rec);
    return out;
}

double LevelShifts::mean() const {
    double s = 0.0;
    for (const auto& [m, v] : shift_mhz) s += v;
    return s / static_cast<double>(shift_mhz.size());
}

double LevelShifts::spread() const {
    double lo = 1e300, hi = -1e300;
    for (const auto& [m, v] : shift_mhz) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

LevelShifts sublevel_shifts(const FortParams& fort, const LineTable& lines,
                            const std::string& level, int f) {
    fort.validate();
    const double j = level_j(level, lines);
    auto fs = fine_structure_shifts(fort, lines, level);

    LevelShifts out;
    out.level = level;
    out.f = f;
    for (int mf = -f; mf <= f; ++mf) {
        double shift = 0.0;
        for (const auto& [mj, value] : fs) {
            double mi = mf - mj;
            if (std::abs(mi) > nuclear_spin + 1e-9) continue;
            double w = clebsch_gordan(j, mj, nuclear_spin, mi, f, mf);
            shift += w * w * value;
        }
        out.shift_mhz[mf] = shift / c::planck / 1e6;
    }
    return out;
}

double trap_depth_mhz(const FortParams& fort, const LineTable& lines) {
    return -sublevel_shifts(fort, lines, level_ground, 2).mean();
}

double calibrate_power(const FortParams& fort_template, const LineTable& lines,
                       double depth_mhz) {
    if (!(depth_mhz > 0.0)) throw ConfigError("calibration depth must be > 0");
    FortParams probe = fort_template;
    probe.power = 1e-3;
    double depth_ref = trap_depth_mhz(probe, lines);
    if (!(depth_ref > 0.0))
        throw ConfigError("line table does not give a trapping (negative) ground shift");
    // second-order shifts are exactly linear in power
    return probe.power * depth_mhz / depth_ref;
}

double probe_resonance_offset_mhz(const FortParams& fort, const LineTable& lines,
                                  Handedness probe) {
    auto ground = sublevel_shifts(fort, lines, level_ground, 2);
    auto excited = sublevel_shifts(fort, lines, level_excited, 3);
    int sign = (probe == Handedness::sigma_plus) ? 1 : -1;
    return excited.shift_mhz.at(3 * sign) - ground.shift_mhz.at(2 * sign);
}

}  // namespace atomlens::stark
