#include <doctest.h>

#include <cmath>

#include "atomlens/errors.hpp"
#include "atomlens/stark.hpp"

using namespace atomlens;
using namespace atomlens::stark;

namespace {

const LineTable& table() {
    static LineTable t = LineTable::load(std::string(ATOMLENS_DATA_DIR) + "/rb87_lines.dat");
    return t;
}

FortParams fort_at(double power_w) {
    FortParams f;
    f.wavelength = 980e-9;
    f.waist = 1.4e-6;
    f.power = power_w;
    f.handedness = Handedness::sigma_plus;
    return f;
}

FortParams calibrated_fort() {
    FortParams f = fort_at(0.0);
    f.power = calibrate_power(f, table(), 27.0);
    return f;
}

}  // namespace

TEST_CASE("line table loads with provenance and rejects bad records") {
    const auto& t = table();
    CHECK(t.records().size() >= 8);
    CHECK(t.lines_for(level_ground).size() >= 2);
    CHECK(t.lines_for(level_excited).size() >= 4);
    for (const auto& rec : t.records()) CHECK(!rec.provenance.empty());

    LineRecord bad;
    bad.lower = "x";
    bad.upper = "y";
    bad.wavelength_nm = -1.0;
    bad.linewidth_mhz = 1.0;
    bad.dipole_au = 1.0;
    CHECK_THROWS_AS(LineTable::from_records({bad}), ConfigError);
}

TEST_CASE("missing level and resonant trap light are rejected") {
    FortParams f = fort_at(0.01);
    CHECK_THROWS_AS(sublevel_shifts(f, table(), "7D5/2", 2), ConfigError);
    f.wavelength = 780.241e-9;  // resonant with the D2 line
    CHECK_THROWS_AS(sublevel_shifts(f, table(), level_ground, 2), ConfigError);
}

TEST_CASE("zero power gives exactly zero shifts") {
    auto shifts = sublevel_shifts(fort_at(0.0), table(), level_ground, 2);
    for (const auto& [mf, v] : shifts.shift_mhz) CHECK(v == 0.0);
    CHECK(trap_depth_mhz(fort_at(0.0), table()) == 0.0);
    CHECK(probe_resonance_offset_mhz(fort_at(0.0), table(), Handedness::sigma_plus) == 0.0);
}

TEST_CASE("calibrated power reproduces the 27 MHz trap depth") {
    FortParams f = calibrated_fort();
    CHECK(trap_depth_mhz(f, table()) == doctest::Approx(27.0).epsilon(1e-9));
    // plain single-lens dipole trap: tens of mW
    CHECK(f.power > 5e-3);
    CHECK(f.power < 100e-3);
}

TEST_CASE("ground manifold: trapped, with ~1 MHz sublevel splitting") {
    auto shifts = sublevel_shifts(calibrated_fort(), table(), level_ground, 2);
    REQUIRE(shifts.shift_mhz.size() == 5);
    CHECK(shifts.mean() == doctest::Approx(-27.0).epsilon(1e-9));
    for (const auto& [mf, v] : shifts.shift_mhz) CHECK(v < 0.0);
    CHECK(shifts.spread() >= 0.5);
    CHECK(shifts.spread() <= 2.0);
}

TEST_CASE("excited manifold: repulsive and strongly split") {
    auto shifts = sublevel_shifts(calibrated_fort(), table(), level_excited, 3);
    REQUIRE(shifts.shift_mhz.size() == 7);
    for (const auto& [mf, v] : shifts.shift_mhz) CHECK(v > 0.0);
    // strongly split compared with the ~1 MHz ground splitting
    CHECK(shifts.spread() > 10.0);
    CHECK(shifts.shift_mhz.at(3) > shifts.shift_mhz.at(-3));
}

TEST_CASE("probe resonance offsets: sign and ordering") {
    FortParams f = calibrated_fort();
    double plus = probe_resonance_offset_mhz(f, table(), Handedness::sigma_plus);
    double minus = probe_resonance_offset_mhz(f, table(), Handedness::sigma_minus);
    CHECK(plus > 0.0);
    CHECK(minus > 0.0);
    CHECK(plus > minus);
}

TEST_CASE("shifts are linear in power over a decade") {
    FortParams f = calibrated_fort();
    auto base = sublevel_shifts(f, table(), level_ground, 2);
    FortParams f10 = f;
    f10.power *= 10.0;
    auto scaled = sublevel_shifts(f10, table(), level_ground, 2);
    for (const auto& [mf, v] : base.shift_mhz)
        CHECK(scaled.shift_mhz.at(mf) == doctest::Approx(10.0 * v).epsilon(0.01));
    CHECK(trap_depth_mhz(f10, table()) ==
          doctest::Approx(10.0 * 27.0).epsilon(0.01));
}

TEST_CASE("handedness symmetry: flip handedness and all m_F together") {
    FortParams plus = calibrated_fort();
    FortParams minus = plus;
    minus.handedness = Handedness::sigma_minus;
    for (const char* level : {level_ground, level_excited}) {
        int f = (level == level_ground) ? 2 : 3;
        auto sp = sublevel_shifts(plus, table(), level, f);
        auto sm = sublevel_shifts(minus, table(), level, f);
        for (const auto& [mf, v] : sp.shift_mhz)
            CHECK(sm.shift_mhz.at(-mf) == doctest::Approx(v).epsilon(1e-12));
    }
}
