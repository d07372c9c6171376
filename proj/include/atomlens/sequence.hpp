#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atomlens/random.hpp"
#include "atomlens/spectroscopy.hpp"

namespace atomlens::sequence {

// Monte Carlo configuration of the trapping-event transmission measurement.
struct SequenceConfig {
    double t_true = 1.0;            // transmission while an atom is trapped
    double rate_no_atom = 1000.0;   // detected probe count rate without atom, s^-1
    double tau_m_min = 0.130;       // s, measurement interval bounds
    double tau_m_max = 0.140;       // s
    double tau_r = 2.0;             // s, reference interval
    double mean_dwell = 1.5;        // s, exponential atom dwell time
    int events_per_point = 100;
    std::uint64_t seed = 0;

    void validate() const;
};

struct MeasureInterval {
    double tau_m = 0.0;     // s
    std::uint64_t n_m = 0;  // photocounts with atom
};

struct TrapEvent {
    std::vector<MeasureInterval> intervals;
    double tau_r = 0.0;
    std::uint64_t n_r = 0;
    double dwell = 0.0;  // s, for diagnostics

    bool excluded() const { return intervals.empty(); }
};

struct TransmissionEstimate {
    double value = 0.0;
    double weight = 0.0;
    double sigma = 0.0;
};

// One trapping event: dwell drawn exponentially, sliced into full measurement
// intervals with uniform tau_m (final partial interval discarded), Poissonian
// photocounts for each interval and for the reference.
TrapEvent simulate_event(const SequenceConfig& config, RandomStream& rng);

// Per-event estimator T = (sum n_m / sum tau_m) * (tau_r / n_r) with weight
// tau_r*sum(tau_m) / (tau_r + sum(tau_m)) and Poisson-propagated sigma.
// Returns nullopt for events with zero complete intervals (excluded); throws
// on n_r = 0.
std::optional<TransmissionEstimate> reduce_event(const TrapEvent& event);

// Weighted mean with the per-event weights; uncertainty from propagated shot
// noise. Invariant under permutation of the inputs.
TransmissionEstimate weighted_average(const std::vector<TransmissionEstimate>& estimates);

// Full pipeline for one spectrum point: simulate events, reduce, average.
TransmissionEstimate simulate_point(const SequenceConfig& config, std::uint64_t substream);

// End-to-end synthetic transmission spectrum. T_true per detuning comes from
// the Lorentzian transmission model; the no-atom count rate is rescaled per
// point to hold the photon scattering rate constant (capped at 100x the
// configured rate as the line tails vanish).
std::vector<spectroscopy::SpectrumPoint> synthesize_spectrum(
    const SequenceConfig& config, const std::vector<double>& detuning_mhz,
    const spectroscopy::LorentzianParams& line);

// event-log row for persistence
struct EventLogRow {
    int event_id = 0;
    int interval_id = 0;  // -1 marks the reference row
    double tau_m_s = 0.0;
    std::uint64_t n_m = 0;
    double tau_r_s = 0.0;
    std::uint64_t n_r = 0;
};
std::vector<EventLogRow> event_log(const std::vector<TrapEvent>& events);

}  // namespace atomlens::sequence
