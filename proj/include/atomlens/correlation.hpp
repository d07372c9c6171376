#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atomlens/random.hpp"

namespace atomlens::correlation {

// Resonantly driven two-level atom. Frequencies are ordinary frequencies in
// MHz (Omega = 2*pi*rabi_mhz etc.); gamma is the natural linewidth.
struct TwoLevelDrive {
    double rabi_mhz = 0.0;
    double gamma_mhz = 0.0;
    double detuning_mhz = 0.0;
    double background_rate = 0.0;  // per detector, s^-1
    double split_ratio = 0.5;      // fraction of atomic photons routed to D1

    void validate() const;
};

struct PhotonStream {
    std::string detector;
    std::vector<double> timestamps;  // s, strictly increasing
    double duration = 0.0;           // s
};

struct G2Histogram {
    std::vector<double> tau_ns;    // bin centers
    std::vector<double> g2;        // normalized coincidences
    std::vector<double> sigma;     // per-bin statistical uncertainty
    std::vector<std::uint64_t> counts;
    double bin_width_ns = 0.0;
    double rate1 = 0.0;            // Hz, normalization record
    double rate2 = 0.0;
    double duration = 0.0;
    bool insufficient_data = false;
};

// g2(tau) of resonance fluorescence, closed form of the on-resonance optical
// Bloch equations started from the ground state:
//   g2(tau) = 1 - e^{-3 G tau/4} [cos(W' tau) + (3G/4W') sin(W' tau)],
// with W'^2 = W^2 - (G/4)^2 (underdamped) and the matching cosh/sinh branch
// otherwise. Requires detuning = 0.
double g2_closed_form(const TwoLevelDrive& drive, double tau_s);
std::vector<double> g2_closed_form(const TwoLevelDrive& drive,
                                   const std::vector<double>& tau_s);

// Direct numerical integration (RK4) of the Bloch equations for the same
// quantity; valid for any detuning. Serves as the correctness oracle for the
// closed form.
std::vector<double> g2_bloch_numeric(const TwoLevelDrive& drive,
                                     const std::vector<double>& tau_s,
                                     double dt_s = 1e-11);

// steady-state excited population and total photon emission rate
double excited_population_ss(const TwoLevelDrive& drive);
double emission_rate_ss(const TwoLevelDrive& drive);

// Waiting-time density between successive emissions, w(t) = Gamma rho_ee of
// the jump-free (conditional) evolution from the ground state, tabulated for
// inverse-transform sampling.
class WaitingTimeSampler {
  public:
    explicit WaitingTimeSampler(const TwoLevelDrive& drive);
    double sample(RandomStream& rng) const;
    double density(double t_s) const;  // w(t), interpolated

  private:
    std::vector<double> times_;
    std::vector<double> cdf_;
    std::vector<double> density_;
};

// Photon detection streams from a renewal-process simulation: after each
// emission the atom restarts in the ground state; emissions are routed to the
// detectors by the split ratio and Poissonian background is superposed.
std::pair<PhotonStream, PhotonStream> simulate_streams(const TwoLevelDrive& drive,
                                                       double duration_s,
                                                       std::uint64_t seed);

// Cross-correlation histogram of delays t2 - t1 within +/- window, normalized
// by the uncorrelated-rate expectation r1*r2*bin*duration.
G2Histogram histogram_g2(const PhotonStream& d1, const PhotonStream& d2,
                         double bin_width_ns, double window_ns);

// Remove the uncorrelated-background floor: g2_atom = 1 + (g2 - 1)/zeta with
// zeta the atomic fraction of coincidences implied by the recorded rates.
G2Histogram subtract_background(const G2Histogram& hist, double background_rate_d1,
                                double background_rate_d2);

void save_stream(const PhotonStream& s, const std::string& path, std::uint64_t seed);
PhotonStream load_stream(const std::string& path);

}  // namespace atomlens::correlation
