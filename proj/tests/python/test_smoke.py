"""Smoke tests for the python bindings (run by ctest with PYTHONPATH set to
the build directory containing _atomlens)."""

import math
import os

import _atomlens as al

DATA_DIR = os.environ.get("ATOMLENS_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def beam():
    w_l = 780e-9 * 4.5e-3 / (math.pi * 860e-9)
    return al.BeamGeometry(wavelength=780e-9, input_waist=w_l, focal_length=4.5e-3,
                           aperture_na=0.55, power=1e-6)


def test_scattering_anchors():
    b = beam()
    full = al.scattering_probability(b, "full")
    para = al.scattering_probability(b, "paraxial")
    assert abs(full - 0.203) / 0.203 < 0.05, full
    assert abs(para - 0.022) / 0.022 < 0.15, para
    assert abs(al.paraxial_waist(b) - 860e-9) < 8.6e-9


def test_scan():
    pts = al.scan_focusing(beam(), "u", 0.05, 0.4, 5, "full")
    assert len(pts) == 5
    assert pts[0][2] < pts[-1][2]


def test_stark():
    lines = al.LineTable.load(os.path.join(DATA_DIR, "rb87_lines.dat"))
    fort = al.FortParams()
    fort.power = al.calibrate_power(fort, lines, 27.0)
    assert abs(al.trap_depth_mhz(fort, lines) - 27.0) < 1e-6
    shifts = al.sublevel_shifts(fort, lines, "5S1/2", 2)
    assert all(v < 0 for v in shifts.values())
    excited = al.sublevel_shifts(fort, lines, "5P3/2", 3)
    assert all(v > 0 for v in excited.values())
    assert al.probe_resonance_offset_mhz(fort, lines, "sigma+") > \
        al.probe_resonance_offset_mhz(fort, lines, "sigma-")


def test_spectroscopy():
    grid = [(-15.0 + i) for i in range(31)]
    pts = al.synthesize_spectrum(grid, 0.098, 7.5, 0.0, 0.0, 0.003, 12345)
    fit = al.fit_lorentzian(pts)
    assert abs(fit.eps_max - 0.098) < 3 * fit.eps_sigma
    assert abs(al.extinction_to_scattering(0.098, 0.05) - 0.098 / 0.95) < 1e-12
    assert abs(al.chain_transmission([("a", 0.784), ("b", 0.947), ("c", 0.716)]) - 0.5316) < 1e-3


def test_g2():
    drive = al.TwoLevelDrive(rabi_mhz=62.0, gamma_mhz=1e3 / (2 * math.pi * 27.0))
    taus = [i * 1e-9 for i in range(0, 100)]
    closed = al.g2_closed_form(drive, taus)
    bloch = al.g2_bloch(drive, taus)
    assert closed[0] == 0.0
    assert max(abs(c - b) for c, b in zip(closed, bloch)) < 1e-6
    t1, t2 = al.simulate_streams(drive, 2e-4, 11)
    assert t1 and t2
    tau, g2, sigma = al.histogram_g2(t1, t2, 2e-4, 1.0, 40.0)
    assert len(tau) == len(g2) == len(sigma)


def test_sequence():
    cfg = al.SequenceConfig(t_true=0.902, rate_no_atom=5000.0, events_per_point=50, seed=3)
    est = al.simulate_point(cfg)
    assert abs(est.value - 0.902) < 5 * est.sigma
    pts = al.sequence_spectrum(cfg, [-5.0, 0.0, 5.0], 0.098, 7.5)
    assert len(pts) == 3


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"{t.__name__}: ok")
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
