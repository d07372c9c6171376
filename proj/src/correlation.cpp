// Second-order correlation of resonance fluorescence from a driven two-level
// atom: closed form, Bloch-equation oracle, renewal-process photon stream
// simulation and delay histogramming.

#include "atomlens/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "atomlens/constants.hpp"
#include "atomlens/errors.hpp"

namespace atomlens::correlation {

namespace c = atomlens::constants;

void TwoLevelDrive::validate() const {
    if (!(gamma_mhz > 0.0)) throw ConfigError("drive: linewidth must be > 0");
    if (!(rabi_mhz >= 0.0)) throw ConfigError("drive: Rabi frequency must be >= 0");
    if (!(background_rate >= 0.0))
        throw ConfigError("drive: background rate must be >= 0");
    if (!(split_ratio > 0.0 && split_ratio < 1.0))
        throw ConfigError("drive: split ratio must lie in (0, 1)");
}

double g2_closed_form(const TwoLevelDrive& drive, double tau_s) {
    drive.validate();
    if (drive.detuning_mhz != 0.0)
        throw ConfigError("closed form is the on-resonance solution; got nonzero detuning");
    const double gamma = c::two_pi * drive.gamma_mhz * 1e6;
    const double omega = c::two_pi * drive.rabi_mhz * 1e6;
    const double tau = std::abs(tau_s);
    const double damp = std::exp(-0.75 * gamma * tau);
    const double disc = omega * omega - gamma * gamma / 16.0;
    double osc;
    if (disc > 0.0) {
        const double w = std::sqrt(disc);
        osc = std::cos(w * tau) + (0.75 * gamma / w) * std::sin(w * tau);
    } else if (disc < 0.0) {
        const double w = std::sqrt(-disc);
        osc = std::cosh(w * tau) + (0.75 * gamma / w) * std::sinh(w * tau);
    } else {
        osc = 1.0 + 0.75 * gamma * tau;
    }
    return 1.0 - damp * osc;
}

std::vector<double> g2_closed_form(const TwoLevelDrive& drive,
                                   const std::vector<double>& tau_s) {
    std::vector<double> out;
    out.reserve(tau_s.size());
    for (double t : tau_s) out.push_back(g2_closed_form(drive, t));
    return out;
}

double excited_population_ss(const TwoLevelDrive& drive) {
    const double gamma = c::two_pi * drive.gamma_mhz * 1e6;
    const double omega = c::two_pi * drive.rabi_mhz * 1e6;
    const double delta = c::two_pi * drive.detuning_mhz * 1e6;
    const double s = 0.5 * omega * omega;
    return 0.5 * s / (delta * delta + 0.25 * gamma * gamma + s);
}

double emission_rate_ss(const TwoLevelDrive& drive) {
    const double gamma = c::two_pi * drive.gamma_mhz * 1e6;
    return gamma * excited_population_ss(drive);
}

namespace {

// Bloch equations for (rho_ee, Re rho_ge, Im rho_ge) in the rotating frame.
struct BlochState {
    double ee, re, im;
};

BlochState bloch_rhs(const BlochState& s, double gamma, double omega, double delta) {
    BlochState d;
    d.ee = -gamma * s.ee - omega * s.im;
    d.re = -0.5 * gamma * s.re - delta * s.im;
    d.im = -0.5 * gamma * s.im + delta * s.re + 0.5 * omega * (2.0 * s.ee - 1.0);
    return d;
}

BlochState rk4_step(const BlochState& s, double h, double gamma, double omega,
                    double delta) {
    auto add = [](const BlochState& a, const BlochState& b, double f) {
        return BlochState{a.ee + f * b.ee, a.re + f * b.re, a.im + f * b.im};
    };
    BlochState k1 = bloch_rhs(s, gamma, omega, delta);
    BlochState k2 = bloch_rhs(add(s, k1, 0.5 * h), gamma, omega, delta);
    BlochState k3 = bloch_rhs(add(s, k2, 0.5 * h), gamma, omega, delta);
    BlochState k4 = bloch_rhs(add(s, k3, h), gamma, omega, delta);
    return BlochState{
        s.ee + h / 6.0 * (k1.ee + 2 * k2.ee + 2 * k3.ee + k4.ee),
        s.re + h / 6.0 * (k1.re + 2 * k2.re + 2 * k3.re + k4.re),
        s.im + h / 6.0 * (k1.im + 2 * k2.im + 2 * k3.im + k4.im),
    };
}

}  // namespace

std::vector<double> g2_bloch_numeric(const TwoLevelDrive& drive,
                                     const std::vector<double>& tau_s,
                                     double dt_s) {
    drive.validate();
    const double gamma = c::two_pi * drive.gamma_mhz * 1e6;
    const double omega = c::two_pi * drive.rabi_mhz * 1e6;
    const double delta = c::two_pi * drive.detuning_mhz * 1e6;
    const double ss = excited_population_ss(drive);
    if (!(ss > 0.0)) throw ConfigError("zero drive has no fluorescence to correlate");

    std::vector<double> sorted = tau_s;
    std::sort(sorted.begin(), sorted.end());
    if (!sorted.empty() && sorted.front() < 0.0)
        throw ConfigError("g2 oracle expects tau >= 0 (negative tau by symmetry)");

    std::vector<double> out(tau_s.size());
    BlochState s{0.0, 0.0, 0.0};  // ground state after a detection
    double t = 0.0;
    std::size_t idx = 0;
    while (idx < sorted.size()) {
        double target = sorted[idx];
        while (t + dt_s <= target) {
            s = rk4_step(s, dt_s, gamma, omega, delta);
            t += dt_s;
        }
        double rem = target - t;
        BlochState probe = (rem > 0.0) ? rk4_step(s, rem, gamma, omega, delta) : s;
        double value = probe.ee / ss;
        // scatter back to the original (possibly unsorted) positions
        for (std::size_t j = 0; j < tau_s.size(); ++j)
            if (tau_s[j] == target) out[j] = value;
        ++idx;
    }
    return out;
}

WaitingTimeSampler::WaitingTimeSampler(const TwoLevelDrive& drive) {
    drive.validate();
    const double gamma = c::two_pi * drive.gamma_mhz * 1e6;
    const double omega = c::two_pi * drive.rabi_mhz * 1e6;
    const double delta = c::two_pi * drive.detuning_mhz * 1e6;
    if (!(omega > 0.0))
        throw ConfigError("waiting-time sampler needs a nonzero drive");

    // jump-free conditional evolution of (c_g, c_e) under the non-Hermitian
    // Hamiltonian; w(t) = Gamma |c_e|^2
    const double scale = std::max({gamma, omega, std::abs(delta)});
    const double dt = 0.005 / scale;
    double cg_re = 1.0, cg_im = 0.0, ce_re = 0.0, ce_im = 0.0;
    auto rhs = [&](double gr, double gi, double er, double ei, double* out) {
        // dc_g/dt = -i (O/2) c_e ; dc_e/dt = -i (O/2) c_g - i d c_e - (G/2) c_e
        out[0] = 0.5 * omega * ei;
        out[1] = -0.5 * omega * er;
        out[2] = 0.5 * omega * gi + delta * ei - 0.5 * gamma * er;
        out[3] = -0.5 * omega * gr - delta * er - 0.5 * gamma * ei;
    };
    times_.push_back(0.0);
    density_.push_back(0.0);
    cdf_.push_back(0.0);
    double survival = 1.0;
    double t = 0.0;
    double k1[4], k2[4], k3[4], k4[4];
    while (survival > 1e-12 && t < 1e4 / gamma) {
        rhs(cg_re, cg_im, ce_re, ce_im, k1);
        rhs(cg_re + 0.5 * dt * k1[0], cg_im + 0.5 * dt * k1[1],
            ce_re + 0.5 * dt * k1[2], ce_im + 0.5 * dt * k1[3], k2);
        rhs(cg_re + 0.5 * dt * k2[0], cg_im + 0.5 * dt * k2[1],
            ce_re + 0.5 * dt * k2[2], ce_im + 0.5 * dt * k2[3], k3);
        rhs(cg_re + dt * k3[0], cg_im + dt * k3[1], ce_re + dt * k3[2],
            ce_im + dt * k3[3], k4);
        cg_re += dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
        cg_im += dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
        ce_re += dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]);
        ce_im += dt / 6.0 * (k1[3] + 2 * k2[3] + 2 * k3[3] + k4[3]);
        t += dt;
        double w = gamma * (ce_re * ce_re + ce_im * ce_im);
        double prev_w = density_.back();
        times_.push_back(t);
        density_.push_back(w);
        cdf_.push_back(cdf_.back() + 0.5 * (w + prev_w) * dt);
        survival = cg_re * cg_re + cg_im * cg_im + ce_re * ce_re + ce_im * ce_im;
    }
    // normalize the tabulated CDF to exactly 1
    double total = cdf_.back();
    if (!(total > 0.0)) throw ConfigError("waiting-time density integrated to zero");
    for (double& v : cdf_) v /= total;
    for (double& v : density_) v /= total;
}

double WaitingTimeSampler::sample(RandomStream& rng) const {
    double u = rng.uniform01();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return times_.front();
    if (it == cdf_.end()) return times_.back();
    std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    double c0 = cdf_[i - 1], c1 = cdf_[i];
    double frac = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.0;
    return times_[i - 1] + frac * (times_[i] - times_[i - 1]);
}

double WaitingTimeSampler::density(double t_s) const {
    if (t_s <= 0.0 || t_s >= times_.back()) return 0.0;
    auto it = std::lower_bound(times_.begin(), times_.end(), t_s);
    std::size_t i = static_cast<std::size_t>(it - times_.begin());
    if (i == 0) return density_.front();
    double t0 = times_[i - 1], t1 = times_[i];
    double frac = (t_s - t0) / (t1 - t0);
    return density_[i - 1] + frac * (density_[i] - density_[i - 1]);
}

std::pair<PhotonStream, PhotonStream> simulate_streams(const TwoLevelDrive& drive,
                                                       double duration_s,
                                                       std::uint64_t seed) {
    drive.validate();
    if (!(duration_s > 0.0)) throw ConfigError("stream duration must be > 0");

    PhotonStream d1{"D1", {}, duration_s};
    PhotonStream d2{"D2", {}, duration_s};

    RandomStream rng_atom(RandomStream::derive(seed, 1));
    RandomStream rng_bg1(RandomStream::derive(seed, 2));
    RandomStream rng_bg2(RandomStream::derive(seed, 3));

    if (drive.rabi_mhz > 0.0) {
        WaitingTimeSampler sampler(drive);
        double t = 0.0;
        while (true) {
            t += sampler.sample(rng_atom);
            if (t >= duration_s) break;
            if (rng_atom.uniform01() < drive.split_ratio)
                d1.timestamps.push_back(t);
            else
                d2.timestamps.push_back(t);
        }
    }
    for (auto* stream : {&d1, &d2}) {
        RandomStream& rng = (stream == &d1) ? rng_bg1 : rng_bg2;
        if (drive.background_rate > 0.0) {
            double t = 0.0;
            while (true) {
                t += rng.exponential(1.0 / drive.background_rate);
                if (t >= duration_s) break;
                stream->timestamps.push_back(t);
            }
        }
        std::sort(stream->timestamps.begin(), stream->timestamps.end());
        // keep timestamps strictly increasing
        for (std::size_t i = 1; i < stream->timestamps.size(); ++i)
            if (stream->timestamps[i] <= stream->timestamps[i - 1])
                stream->timestamps[i] =
                    std::nextafter(stream->timestamps[i - 1], duration_s);
    }
    return {d1, d2};
}

G2Histogram histogram_g2(const PhotonStream& d1, const PhotonStream& d2,
                         double bin_width_ns, double window_ns) {
    if (!(bin_width_ns > 0.0)) throw ConfigError("histogram: bin width must be > 0");
    if (!(window_ns > 0.0)) throw ConfigError("histogram: window must be > 0");
    if (d1.duration != d2.duration)
        throw ConfigError("histogram: streams must cover a common duration");

    const int nbins = 2 * static_cast<int>(std::ceil(window_ns / bin_width_ns));
    const double w_ns = 0.5 * nbins * bin_width_ns;
    const double w_s = w_ns * 1e-9;

    G2Histogram hist;
    hist.bin_width_ns = bin_width_ns;
    hist.duration = d1.duration;
    hist.counts.assign(nbins, 0);
    hist.tau_ns.resize(nbins);
    for (int i = 0; i < nbins; ++i)
        hist.tau_ns[i] = -w_ns + (i + 0.5) * bin_width_ns;

    // all cross-detector pairs within the window, two-pointer sweep
    std::size_t lo = 0;
    for (double t1 : d1.timestamps) {
        while (lo < d2.timestamps.size() && d2.timestamps[lo] < t1 - w_s) ++lo;
        for (std::size_t j = lo; j < d2.timestamps.size(); ++j) {
            double dt = d2.timestamps[j] - t1;
            if (dt >= w_s) break;
            int bin = static_cast<int>((dt + w_s) / (bin_width_ns * 1e-9));
            if (bin >= 0 && bin < nbins) ++hist.counts[static_cast<std::size_t>(bin)];
        }
    }

    hist.rate1 = static_cast<double>(d1.timestamps.size()) / d1.duration;
    hist.rate2 = static_cast<double>(d2.timestamps.size()) / d2.duration;
    double norm = hist.rate1 * hist.rate2 * bin_width_ns * 1e-9 * hist.duration;
    hist.g2.assign(nbins, 0.0);
    hist.sigma.assign(nbins, 0.0);
    if (norm <= 0.0 || d1.timestamps.empty() || d2.timestamps.empty()) {
        hist.insufficient_data = true;
        return hist;
    }
    for (int i = 0; i < nbins; ++i) {
        auto n = static_cast<double>(hist.counts[static_cast<std::size_t>(i)]);
        hist.g2[i] = n / norm;
        hist.sigma[i] = std::sqrt(std::max(n, 1.0)) / norm;
    }
    return hist;
}

G2Histogram subtract_background(const G2Histogram& hist, double background_rate_d1,
                                double background_rate_d2) {
    if (hist.insufficient_data) return hist;
    double atomic1 = hist.rate1 - background_rate_d1;
    double atomic2 = hist.rate2 - background_rate_d2;
    if (!(atomic1 > 0.0 && atomic2 > 0.0))
        throw ConfigError("background rates exceed the recorded stream rates");
    double zeta = (atomic1 * atomic2) / (hist.rate1 * hist.rate2);
    G2Histogram out = hist;
    for (std::size_t i = 0; i < out.g2.size(); ++i) {
        out.g2[i] = 1.0 + (hist.g2[i] - 1.0) / zeta;
        out.sigma[i] = hist.sigma[i] / zeta;
    }
    return out;
}

void save_stream(const PhotonStream& s, const std::string& path, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write stream file: " + path);
    out << "# detector " << s.detector << "\n";
    out << "# duration_s " << std::scientific << s.duration << "\n";
    out << "# seed " << seed << "\n";
    out.precision(15);
    for (double t : s.timestamps) out << t << "\n";
}

PhotonStream load_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open stream file: " + path);
    PhotonStream s;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string tok;
        if (line.rfind("# detector", 0) == 0) {
            row >> tok >> tok >> s.detector;
        } else if (line.rfind("# duration_s", 0) == 0) {
            row >> tok >> tok >> s.duration;
        } else if (!line.empty() && line[0] != '#') {
            s.timestamps.push_back(std::stod(line));
        }
    }
    return s;
}

}  // namespace atomlens::correlation
