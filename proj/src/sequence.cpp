// Monte Carlo of the atom-trapping measurement sequence and its exact data
// reduction: per-event transmission estimator, event weighting and
// shot-noise error propagation.

#include "atomlens/sequence.hpp"

#include <cmath>

#include "atomlens/errors.hpp"

namespace atomlens::sequence {

void SequenceConfig::validate() const {
    if (!(t_true > 0.0 && t_true <= 1.0))
        throw ConfigError("sequence: T_true must lie in (0, 1]");
    if (!(rate_no_atom >= 0.0)) throw ConfigError("sequence: rate must be >= 0");
    if (!(tau_m_min > 0.0 && tau_m_max >= tau_m_min))
        throw ConfigError("sequence: need 0 < tau_m_min <= tau_m_max");
    if (!(tau_r > 0.0)) throw ConfigError("sequence: tau_r must be > 0");
    if (!(mean_dwell > 0.0)) throw ConfigError("sequence: mean dwell must be > 0");
    if (events_per_point < 1)
        throw ConfigError("sequence: events per point must be >= 1");
}

TrapEvent simulate_event(const SequenceConfig& config, RandomStream& rng) {
    config.validate();
    TrapEvent event;
    event.dwell = rng.exponential(config.mean_dwell);
    event.tau_r = config.tau_r;

    double elapsed = 0.0;
    while (true) {
        double tau_m = rng.uniform(config.tau_m_min, config.tau_m_max);
        if (elapsed + tau_m > event.dwell) break;  // partial interval discarded
        MeasureInterval iv;
        iv.tau_m = tau_m;
        iv.n_m = rng.poisson(config.rate_no_atom * config.t_true * tau_m);
        event.intervals.push_back(iv);
        elapsed += tau_m;
    }
    event.n_r = rng.poisson(config.rate_no_atom * config.tau_r);
    return event;
}

std::optional<TransmissionEstimate> reduce_event(const TrapEvent& event) {
    if (event.excluded()) return std::nullopt;
    if (event.n_r == 0)
        throw ConfigError("reduce_event: reference count is zero");
    double sum_tau = 0.0;
    double sum_n = 0.0;
    for (const auto& iv : event.intervals) {
        sum_tau += iv.tau_m;
        sum_n += static_cast<double>(iv.n_m);
    }
    TransmissionEstimate est;
    est.value = (sum_n / sum_tau) * (event.tau_r / static_cast<double>(event.n_r));
    est.weight = event.tau_r * sum_tau / (event.tau_r + sum_tau);
    // Poisson propagation; an empty measurement record still carries the
    // one-count scale of uncertainty
    double n_eff = std::max(sum_n, 1.0);
    double base = (sum_n > 0.0) ? est.value
                                : event.tau_r / (sum_tau * static_cast<double>(event.n_r));
    est.sigma = base * std::sqrt(1.0 / n_eff + 1.0 / static_cast<double>(event.n_r));
    return est;
}

TransmissionEstimate weighted_average(const std::vector<TransmissionEstimate>& estimates) {
    if (estimates.empty())
        throw ConfigError("weighted_average: empty estimate list");
    // Kahan-compensated sums keep the result independent of input order
    double sw = 0.0, cw = 0.0;
    double swt = 0.0, cwt = 0.0;
    double svar = 0.0, cvar = 0.0;
    auto acc = [](double& sum, double& comp, double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    for (const auto& est : estimates) {
        if (!(est.weight > 0.0))
            throw ConfigError("weighted_average: weights must be > 0");
        acc(sw, cw, est.weight);
        acc(swt, cwt, est.weight * est.value);
        acc(svar, cvar, est.weight * est.weight * est.sigma * est.sigma);
    }
    TransmissionEstimate out;
    out.value = swt / sw;
    out.weight = sw;
    out.sigma = std::sqrt(svar) / sw;
    return out;
}

TransmissionEstimate simulate_point(const SequenceConfig& config,
                                    std::uint64_t substream) {
    config.validate();
    std::vector<TransmissionEstimate> estimates;
    estimates.reserve(static_cast<std::size_t>(config.events_per_point));
    int produced = 0;
    int attempts = 0;
    const int max_attempts = 20 * config.events_per_point + 100;
    while (produced < config.events_per_point && attempts < max_attempts) {
        RandomStream rng(RandomStream::derive(config.seed, substream,
                                              static_cast<std::uint64_t>(attempts)));
        ++attempts;
        TrapEvent event = simulate_event(config, rng);
        auto est = reduce_event(event);
        if (!est) continue;  // dwell shorter than one interval
        estimates.push_back(*est);
        ++produced;
    }
    if (estimates.empty())
        throw ConfigError("simulate_point: no usable trapping events produced");
    return weighted_average(estimates);
}

std::vector<spectroscopy::SpectrumPoint> synthesize_spectrum(
    const SequenceConfig& config, const std::vector<double>& detuning_mhz,
    const spectroscopy::LorentzianParams& line) {
    config.validate();
    auto model = spectroscopy::transmission_model(detuning_mhz, line);

    std::vector<spectroscopy::SpectrumPoint> out;
    out.reserve(detuning_mhz.size());
    for (std::size_t i = 0; i < detuning_mhz.size(); ++i) {
        SequenceConfig point_config = config;
        point_config.t_true = model[i].transmission;
        // constant photon scattering rate: probe intensity (hence the no-atom
        // count rate) scales inversely with P_sc at this detuning
        if (line.p_sc_max > 0.0) {
            double psc = spectroscopy::p_sc_lorentzian(detuning_mhz[i], line);
            double scale = line.p_sc_max / std::max(psc, line.p_sc_max / 100.0);
            point_config.rate_no_atom = config.rate_no_atom * scale;
        }
        TransmissionEstimate est = simulate_point(point_config, i);
        out.push_back({detuning_mhz[i], est.value, est.sigma});
    }
    return out;
}

std::vector<EventLogRow> event_log(const std::vector<TrapEvent>& events) {
    std::vector<EventLogRow> rows;
    for (std::size_t e = 0; e < events.size(); ++e) {
        const TrapEvent& ev = events[e];
        for (std::size_t i = 0; i < ev.intervals.size(); ++i) {
            EventLogRow row;
            row.event_id = static_cast<int>(e);
            row.interval_id = static_cast<int>(i);
            row.tau_m_s = ev.intervals[i].tau_m;
            row.n_m = ev.intervals[i].n_m;
            row.tau_r_s = ev.tau_r;
            row.n_r = ev.n_r;
            rows.push_back(row);
        }
        EventLogRow ref;
        ref.event_id = static_cast<int>(e);
        ref.interval_id = -1;
        ref.tau_r_s = ev.tau_r;
        ref.n_r = ev.n_r;
        rows.push_back(ref);
    }
    return rows;
}

}  // namespace atomlens::sequence
