// atomlens command line: every computation as a subcommand over one shared
// configuration file, with deterministic seeding and tabular outputs.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <limits>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "atomlens/config.hpp"
#include "atomlens/correlation.hpp"
#include "atomlens/errors.hpp"
#include "atomlens/focalfield.hpp"
#include "atomlens/sequence.hpp"
#include "atomlens/spectroscopy.hpp"
#include "atomlens/stark.hpp"
#include "atomlens/table.hpp"

namespace fs = std::filesystem;
using namespace atomlens;

namespace {

constexpr const char* version = "0.1.0";

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
};

Range parse_range(const std::string& text) {
    Range r;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &r.lo, &r.hi, &r.n) != 3)
        throw ConfigError("bad --range '" + text + "' (expected lo:hi:n)");
    if (r.n < 0) throw ConfigError("--range point count must be >= 0");
    return r;
}

struct Run {
    config::RunConfig cfg;
    std::string out_dir;
    table::OutputFormat format;
    std::vector<std::string> outputs;

    std::string path(const std::string& name) const {
        return (fs::path(out_dir) / name).string();
    }

    table::Writer writer() const { return table::Writer(cfg.config_hash, cfg.seed); }

    void save(table::Writer& w, const std::string& name) {
        w.save(path(name), format);
        outputs.push_back(name);
    }

    void manifest(const std::string& subcommand) const {
        table::Writer w(cfg.config_hash, cfg.seed);
        w.kv_text("tool", "atomlens");
        w.kv_text("version", version);
        w.kv_text("subcommand", subcommand);
        w.kv_text("config_hash", cfg.config_hash);
        w.kv_text("seed", std::to_string(cfg.seed));
        for (const auto& o : outputs) w.kv_text("output", o);
        w.save(path("manifest_" + subcommand + ".txt"), table::OutputFormat::kv);
    }
};

Run make_run(const GlobalArgs& args) {
    if (args.config_path.empty()) throw ConfigError("--config is required");
    Run run{config::RunConfig::load(args.config_path), "", table::OutputFormat::dsv, {}};
    if (args.seed_set) run.cfg.seed = args.seed;
    run.out_dir = args.out_dir.empty() ? run.cfg.output_dir : args.out_dir;
    std::string fmt = args.format.empty() ? run.cfg.format : args.format;
    run.format = table::parse_format(fmt);
    std::error_code ec;
    fs::create_directories(run.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + run.out_dir);
    return run;
}

const focalfield::BeamGeometry& need_beam(const Run& run) {
    if (!run.cfg.beam) throw ConfigError("config has no [beam] section");
    return *run.cfg.beam;
}

stark::FortParams need_fort(const Run& run, const stark::LineTable& lines) {
    if (!run.cfg.fort) throw ConfigError("config has no [fort] section");
    stark::FortParams fort = *run.cfg.fort;
    if (run.cfg.fort_depth_mhz)
        fort.power = stark::calibrate_power(fort, lines, *run.cfg.fort_depth_mhz);
    return fort;
}

stark::LineTable need_lines(const Run& run) {
    if (!run.cfg.lines_file) throw ConfigError("config has no lines_file entry");
    return stark::LineTable::load(run.cfg.resolve(*run.cfg.lines_file));
}

// ---------------------------------------------------------------- field ----

int cmd_field(const GlobalArgs& args, const std::string& model_name,
              const std::string& scan_name, const std::string& range_text,
              bool anchor) {
    Run run = make_run(args);
    const auto& beam = need_beam(run);

    if (anchor) {
        auto para = focalfield::scattering_probability(beam, focalfield::FocusModel::paraxial);
        auto full = focalfield::scattering_probability(beam, focalfield::FocusModel::full);
        // second reading of the paraxial number: best over the input waist
        auto best = focalfield::scan_focusing(beam, focalfield::ScanVariable::numerical_aperture,
                                              beam.aperture_na, beam.aperture_na, 1,
                                              focalfield::FocusModel::paraxial);
        std::printf("p_sc paraxial at configured waist: %.4f %%\n", 100.0 * para.p_sc);
        std::printf("p_sc paraxial best over waist:     %.4f %% (u = %.4f)\n",
                    100.0 * best[0].p_sc, best[0].u);
        std::printf("p_sc full at configured waist:     %.4f %%\n", 100.0 * full.p_sc);
        table::Writer w = run.writer();
        w.kv("p_sc_paraxial", para.p_sc);
        w.kv("p_sc_paraxial_best_waist", best[0].p_sc);
        w.kv("p_sc_full", full.p_sc);
        run.save(w, "field_anchor.kv");
        run.manifest("field");
        return 0;
    }

    if (!scan_name.empty()) {
        Range range = parse_range(range_text);
        auto var = (scan_name == "u") ? focalfield::ScanVariable::focusing_strength
                                      : focalfield::ScanVariable::numerical_aperture;
        if (scan_name != "u" && scan_name != "na")
            throw ConfigError("--scan must be u or na");
        bool want_para = (model_name == "paraxial" || model_name == "both");
        bool want_full = (model_name == "full" || model_name == "both");
        std::vector<focalfield::ScanPoint> para, full;
        if (want_para)
            para = focalfield::scan_focusing(beam, var, range.lo, range.hi, range.n,
                                             focalfield::FocusModel::paraxial);
        if (want_full)
            full = focalfield::scan_focusing(beam, var, range.lo, range.hi, range.n,
                                             focalfield::FocusModel::full);
        table::Writer w = run.writer();
        w.meta("scan", scan_name);
        w.columns({"u", "na", "p_sc_paraxial", "p_sc_full"});
        int n = range.n;
        for (int i = 0; i < n; ++i) {
            const auto& ref = want_full ? full[i] : para[i];
            double p_para = want_para ? para[i].p_sc
                                      : std::numeric_limits<double>::quiet_NaN();
            double p_full = want_full ? full[i].p_sc
                                      : std::numeric_limits<double>::quiet_NaN();
            w.row({ref.u, ref.na, p_para, p_full});
        }
        run.save(w, "field_scan.dsv");
        run.manifest("field");
        return 0;
    }

    // default: focal field and scattering probability for both models
    table::Writer w = run.writer();
    for (auto model : {focalfield::FocusModel::paraxial, focalfield::FocusModel::full}) {
        const char* tag = (model == focalfield::FocusModel::paraxial) ? "paraxial" : "full";
        auto field = focalfield::focal_field(beam, model);
        auto sc = focalfield::scattering_probability(beam, model);
        w.kv(std::string(tag) + ".e_co_v_per_m", std::abs(field.e_co));
        w.kv(std::string(tag) + ".focus_z_mm", field.focus_z * 1e3);
        w.kv(std::string(tag) + ".p_sc", sc.p_sc);
    }
    w.kv("paraxial.waist_nm", focalfield::paraxial_waist(beam) * 1e9);
    w.kv("u", beam.focusing_strength());
    run.save(w, "field.kv");
    run.manifest("field");
    return 0;
}

// ---------------------------------------------------------------- stark ----

int cmd_stark(const GlobalArgs& args) {
    Run run = make_run(args);
    auto lines = need_lines(run);
    auto fort = need_fort(run, lines);

    auto ground = stark::sublevel_shifts(fort, lines, stark::level_ground, 2);
    auto excited = stark::sublevel_shifts(fort, lines, stark::level_excited, 3);

    table::Writer w = run.writer();
    w.meta("fort_power_mw", table::format_double(fort.power * 1e3));
    w.columns({"level", "f", "m_f", "shift_mhz"});
    for (const auto* shifts : {&ground, &excited})
        for (const auto& [mf, val] : shifts->shift_mhz)
            w.row_text({shifts->level, std::to_string(shifts->f), std::to_string(mf),
                        table::format_double(val)});
    run.save(w, "stark_shifts.dsv");

    table::Writer s = run.writer();
    s.kv("fort_power_mw", fort.power * 1e3);
    s.kv("trap_depth_mhz", stark::trap_depth_mhz(fort, lines));
    s.kv("ground_spread_mhz", ground.spread());
    s.kv("offset_sigma_plus_mhz",
         stark::probe_resonance_offset_mhz(fort, lines, stark::Handedness::sigma_plus));
    s.kv("offset_sigma_minus_mhz",
         stark::probe_resonance_offset_mhz(fort, lines, stark::Handedness::sigma_minus));
    run.save(s, "stark_summary.kv");
    run.manifest("stark");
    return 0;
}

// -------------------------------------------------------------- spectrum ----

int cmd_spectrum(const GlobalArgs& args, const std::string& fit_file,
                 const std::string& range_text, bool synthetic) {
    Run run = make_run(args);

    if (!fit_file.empty()) {
        auto pts = spectroscopy::load_spectrum(fit_file);
        auto fit = spectroscopy::fit_lorentzian(pts);
        table::Writer w = run.writer();
        w.kv("center_mhz", fit.center_mhz);
        w.kv("center_sigma_mhz", fit.center_sigma);
        w.kv("fwhm_mhz", fit.fwhm_mhz);
        w.kv("fwhm_sigma_mhz", fit.fwhm_sigma);
        w.kv("eps_max", fit.eps_max);
        w.kv("eps_sigma", fit.eps_sigma);
        w.kv("baseline", fit.baseline);
        w.kv("baseline_sigma", fit.baseline_sigma);
        w.kv("chi2", fit.chi2);
        run.save(w, "spectrum_fit.kv");
        run.manifest("spectrum");
        return 0;
    }

    if (!run.cfg.line_shape) throw ConfigError("config has no [spectrum] section");
    Range range = parse_range(range_text);
    std::vector<double> grid;
    for (int i = 0; i < range.n; ++i)
        grid.push_back(range.n == 1 ? range.lo
                                    : range.lo + (range.hi - range.lo) * i / (range.n - 1));

    table::Writer w = run.writer();
    w.columns({"detuning_mhz", "transmission", "sigma"});
    if (synthetic) {
        double sigma_t = run.cfg.spectrum_sigma_t.value_or(0.005);
        RandomStream rng(RandomStream::derive(run.cfg.seed, 0xfeed));
        auto synth = spectroscopy::synthesize_spectrum(grid, *run.cfg.line_shape,
                                                       sigma_t, rng);
        if (!synth.warning.empty())
            std::cerr << "warning: " << synth.warning << "\n";
        for (const auto& pt : synth.points)
            w.row({pt.detuning_mhz, pt.transmission, pt.sigma});
        run.save(w, "spectrum_synthetic.dsv");
        auto fit = spectroscopy::fit_lorentzian(synth.points);
        table::Writer f = run.writer();
        f.kv("eps_max", fit.eps_max);
        f.kv("eps_sigma", fit.eps_sigma);
        f.kv("fwhm_mhz", fit.fwhm_mhz);
        f.kv("fwhm_sigma_mhz", fit.fwhm_sigma);
        run.save(f, "spectrum_fit.kv");
    } else {
        for (const auto& pt : spectroscopy::transmission_model(grid, *run.cfg.line_shape))
            w.row({pt.detuning_mhz, pt.transmission, pt.sigma});
        run.save(w, "spectrum_model.dsv");
    }
    run.manifest("spectrum");
    return 0;
}

// -------------------------------------------------------------------- g2 ----

int cmd_g2(const GlobalArgs& args, double duration_s, double bin_ns, double window_ns,
           bool subtract_bg) {
    Run run = make_run(args);
    if (!run.cfg.drive) throw ConfigError("config has no [drive] section");
    const auto& drive = *run.cfg.drive;
    if (!(duration_s > 0.0))
        throw ConfigError("--duration must be > 0 (got " +
                          table::format_double(duration_s) + ")");

    auto [d1, d2] = correlation::simulate_streams(drive, duration_s, run.cfg.seed);
    correlation::save_stream(d1, run.path("stream_d1.dsv"), run.cfg.seed);
    correlation::save_stream(d2, run.path("stream_d2.dsv"), run.cfg.seed);
    run.outputs.push_back("stream_d1.dsv");
    run.outputs.push_back("stream_d2.dsv");

    auto hist = correlation::histogram_g2(d1, d2, bin_ns, window_ns);
    if (subtract_bg)
        hist = correlation::subtract_background(hist, drive.background_rate,
                                                drive.background_rate);
    if (hist.insufficient_data) std::cerr << "warning: insufficient data in histogram\n";

    table::Writer w = run.writer();
    w.meta("rate1_hz", table::format_double(hist.rate1));
    w.meta("rate2_hz", table::format_double(hist.rate2));
    w.columns({"tau_ns", "g2", "sigma"});
    for (std::size_t i = 0; i < hist.tau_ns.size(); ++i)
        w.row({hist.tau_ns[i], hist.g2[i], hist.sigma[i]});
    run.save(w, "g2_histogram.dsv");

    table::Writer cf = run.writer();
    cf.columns({"tau_ns", "g2"});
    if (drive.detuning_mhz == 0.0) {
        for (double tau_ns = 0.0; tau_ns <= window_ns; tau_ns += bin_ns / 2.0)
            cf.row({tau_ns, correlation::g2_closed_form(drive, tau_ns * 1e-9)});
    } else {
        std::vector<double> taus;
        for (double tau_ns = 0.0; tau_ns <= window_ns; tau_ns += bin_ns / 2.0)
            taus.push_back(tau_ns * 1e-9);
        auto vals = correlation::g2_bloch_numeric(drive, taus);
        for (std::size_t i = 0; i < taus.size(); ++i) cf.row({taus[i] * 1e9, vals[i]});
    }
    run.save(cf, "g2_model.dsv");
    run.manifest("g2");
    return 0;
}

// -------------------------------------------------------------- sequence ----

int cmd_sequence(const GlobalArgs& args, int events_override, bool synth_spectrum,
                 const std::string& range_text) {
    Run run = make_run(args);
    if (!run.cfg.sequence_cfg) throw ConfigError("config has no [sequence] section");
    sequence::SequenceConfig seq = *run.cfg.sequence_cfg;
    seq.seed = run.cfg.seed;
    if (events_override > 0) seq.events_per_point = events_override;

    if (synth_spectrum) {
        if (!run.cfg.line_shape)
            throw ConfigError("sequence spectrum synthesis needs a [spectrum] section");
        Range range = parse_range(range_text);
        std::vector<double> grid;
        for (int i = 0; i < range.n; ++i)
            grid.push_back(range.n == 1
                               ? range.lo
                               : range.lo + (range.hi - range.lo) * i / (range.n - 1));
        auto pts = sequence::synthesize_spectrum(seq, grid, *run.cfg.line_shape);
        table::Writer w = run.writer();
        w.columns({"detuning_mhz", "transmission", "sigma"});
        for (const auto& pt : pts) w.row({pt.detuning_mhz, pt.transmission, pt.sigma});
        run.save(w, "sequence_spectrum.dsv");
        run.manifest("sequence");
        return 0;
    }

    std::vector<sequence::TrapEvent> events;
    std::vector<sequence::TransmissionEstimate> estimates;
    int attempts = 0;
    while (static_cast<int>(estimates.size()) < seq.events_per_point &&
           attempts < 20 * seq.events_per_point + 100) {
        RandomStream rng(RandomStream::derive(seq.seed, 0,
                                              static_cast<std::uint64_t>(attempts)));
        ++attempts;
        auto event = sequence::simulate_event(seq, rng);
        events.push_back(event);
        if (auto est = sequence::reduce_event(event)) estimates.push_back(*est);
    }
    auto avg = sequence::weighted_average(estimates);

    table::Writer w = run.writer();
    w.columns({"event_id", "interval_id", "tau_m_s", "n_m", "tau_r_s", "n_r"});
    for (const auto& row : sequence::event_log(events))
        w.row({static_cast<double>(row.event_id), static_cast<double>(row.interval_id),
               row.tau_m_s, static_cast<double>(row.n_m), row.tau_r_s,
               static_cast<double>(row.n_r)});
    run.save(w, "sequence_events.dsv");

    table::Writer s = run.writer();
    s.kv("transmission", avg.value);
    s.kv("sigma", avg.sigma);
    s.kv("events_used", static_cast<double>(estimates.size()));
    s.kv("events_simulated", static_cast<double>(events.size()));
    run.save(s, "sequence_estimate.kv");
    run.manifest("sequence");
    return 0;
}

// ---------------------------------------------------------------- losses ----

int cmd_losses(const GlobalArgs& args, const std::string& chain_file) {
    Run run = make_run(args);
    std::string path = chain_file;
    if (path.empty()) {
        if (!run.cfg.loss_chain_file)
            throw ConfigError("no --chain file and no loss_chain_file in config");
        path = run.cfg.resolve(*run.cfg.loss_chain_file);
    }
    auto chain = spectroscopy::load_loss_chain(path);
    double total = spectroscopy::chain_transmission(chain);
    std::printf("%.6g\n", total);

    table::Writer w = run.writer();
    for (const auto& el : chain) w.kv("element." + el.name, el.transmission);
    w.kv("total_transmission", total);
    run.save(w, "losses.kv");
    run.manifest("losses");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atomlens: single-atom free-space photon coupling toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", version);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "path to the run configuration file");
    app.add_option("--out", g.out_dir, "output directory (default from config)");
    app.add_option("--format", g.format, "output format: dsv or kv");
    auto* seed_opt = app.add_option("--seed", g.seed, "override the config seed");

    auto* field = app.add_subcommand("field", "focal field and scattering probability");
    std::string model = "both", scan, range = "0.05:1.0:50";
    bool anchor = false;
    field->add_option("--model", model, "paraxial, full or both");
    field->add_option("--scan", scan, "scan variable: u or na");
    field->add_option("--range", range, "scan grid lo:hi:n");
    field->add_flag("--anchor", anchor, "print experiment-geometry anchor values");

    auto* starkc = app.add_subcommand("stark", "FORT AC-Stark shifts");

    auto* spectrum = app.add_subcommand("spectrum", "transmission spectra and fits");
    std::string fit_file, sp_range = "-15:15:61";
    bool synthetic = false;
    spectrum->add_option("--fit", fit_file, "fit an existing spectrum file");
    spectrum->add_option("--range", sp_range, "detuning grid lo:hi:n (MHz)");
    spectrum->add_flag("--synthetic", synthetic, "add shot noise and fit the result");

    auto* g2 = app.add_subcommand("g2", "antibunching simulation and histogram");
    double duration = 2e-3, bin_ns = 1.0, window_ns = 60.0;
    bool subtract_bg = false;
    g2->add_option("--duration", duration, "stream duration in seconds");
    g2->add_option("--bin-ns", bin_ns, "histogram bin width (ns)");
    g2->add_option("--window-ns", window_ns, "histogram window +/- (ns)");
    g2->add_flag("--subtract-background", subtract_bg, "background-corrected histogram");

    auto* seqc = app.add_subcommand("sequence", "trapping-event Monte Carlo");
    int events = 0;
    bool synth_spec = false;
    std::string seq_range = "-15:15:31";
    seqc->add_option("--events", events, "override events per point");
    seqc->add_flag("--synth-spectrum", synth_spec, "synthesize a full spectrum");
    seqc->add_option("--range", seq_range, "detuning grid lo:hi:n (MHz)");

    auto* losses = app.add_subcommand("losses", "transmission-chain audit");
    std::string chain_file;
    losses->add_option("--chain", chain_file, "loss chain file");

    try {
        app.parse(argc, argv);
        g.seed_set = seed_opt->count() > 0;
        if (field->parsed()) return cmd_field(g, model, scan, range, anchor);
        if (starkc->parsed()) return cmd_stark(g);
        if (spectrum->parsed()) return cmd_spectrum(g, fit_file, sp_range, synthetic);
        if (g2->parsed()) return cmd_g2(g, duration, bin_ns, window_ns, subtract_bg);
        if (seqc->parsed()) return cmd_sequence(g, events, synth_spec, seq_range);
        if (losses->parsed()) return cmd_losses(g, chain_file);
        return 1;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const FitError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
}
