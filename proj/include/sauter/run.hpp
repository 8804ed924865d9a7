#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "checkpoint.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "fields.hpp"
#include "free_basis.hpp"
#include "grid.hpp"
#include "manifest.hpp"
#include "observables.hpp"
#include "peaks.hpp"
#include "propagator.hpp"

namespace sauter {

struct RunOptions {
    std::filesystem::path out_dir = "out";
    /// Extra density snapshot times; the final time is always written.
    std::vector<double> density_times;
    unsigned threads = 0;
    /// Also dump U_pn at every matrix step in the binary checkpoint format.
    bool write_checkpoints = false;
};

struct RunSummary {
    std::filesystem::path out_dir;
    SpectrumResult spectrum;
    TimeSeriesResult timeseries;
    std::vector<DensityResult> densities;
    double final_number = 0.0;
    double max_completeness_error = 0.0;
    RunManifest manifest;
};

inline std::string density_file_name(const EvolutionSchedule &schedule, std::size_t step) {
    return step == schedule.steps ? "density.csv" : "density_step" + std::to_string(step) + ".csv";
}

/// Propagates, derives every observable and writes
/// spectrum.csv, timeseries.csv, density*.csv and manifest.json into out_dir.
inline RunSummary run_evolve(const SimulationConfig &config, const RunOptions &options) {
    config.validate();
    if (!config.wraparound_safe())
        std::cerr << "warning: c*T = " << config.c * config.total_time() << " exceeds L/2 = " << config.box_length / 2
                  << "; created pairs may wrap around the periodic box\n";
    const auto started = std::chrono::system_clock::now();

    const Grid grid = build_grid(config);
    const FreeBasis basis = build_free_basis(grid, config.c);
    const FieldSampler field(config, grid);
    const EvolutionSchedule schedule = make_schedule(config, options.density_times);
    EvolveOptions evolve;
    evolve.threads = options.threads;
    const EvolutionResult result = evolve_all(basis, field, schedule, evolve);

    RunSummary summary;
    summary.out_dir = options.out_dir;
    summary.spectrum = momentum_spectrum(result.matrices.back());
    summary.timeseries = result.timeseries;
    summary.densities = result.densities;
    summary.final_number = result.timeseries.numbers.back();
    summary.max_completeness_error = result.max_completeness_error;

    std::filesystem::create_directories(options.out_dir);
    auto emit = [&](const std::string &name, const std::string &content) {
        write_file_atomic(options.out_dir / name, content);
        summary.manifest.digests[name] = sha256_hex(content);
    };

    std::vector<double> modes(summary.spectrum.modes.begin(), summary.spectrum.modes.end());
    emit("spectrum.csv", render_csv({"N_p", "N"}, {modes, summary.spectrum.occupation}));
    emit("timeseries.csv", render_csv({"t", "N"}, {summary.timeseries.times, summary.timeseries.numbers}));
    for (std::size_t d = 0; d < result.densities.size(); ++d)
        emit(density_file_name(schedule, schedule.density_steps[d]),
             render_csv({"z", "rho"}, {result.densities[d].positions, result.densities[d].density}));
    if (options.write_checkpoints)
        for (const auto &u : result.matrices) {
            const auto path = options.out_dir / ("U_step" + std::to_string(u.step()) + ".upnm");
            write_checkpoint(path.string(), u);
        }

    summary.manifest.config = config;
    summary.manifest.started = utc_timestamp(started);
    summary.manifest.finished = utc_timestamp(std::chrono::system_clock::now());
    write_file_atomic(options.out_dir / "manifest.json", summary.manifest.to_json().dump(2) + "\n");
    return summary;
}

struct SweepPlan {
    SimulationConfig base;
    /// Left-edge widths in units of lambda_e.
    std::vector<double> left_widths = {0.075, 0.15, 0.3, 0.6, 0.9, 1.2, 1.5};
    /// Also run the one-sided well with W = W1 as a reference.
    bool one_sided_reference = false;
    std::filesystem::path out_dir = "sweep";

    void validate() const {
        if (left_widths.empty()) throw ConfigError("sweep needs at least one W2 value");
        for (std::size_t i = 0; i < left_widths.size(); ++i) {
            if (!(left_widths[i] > 0.0)) throw ConfigError("sweep W2 values must be positive");
            for (std::size_t j = 0; j < i; ++j)
                if (left_widths[i] == left_widths[j]) throw ConfigError("sweep W2 values must be distinct");
        }
    }
};

struct SweepEntry {
    double width_le;
    WellShape shape;
    bool ok = false;
    double final_number = 0.0;
    std::string error;
    std::filesystem::path dir;
};

struct SweepSummary {
    std::vector<SweepEntry> entries;
    bool partial_failure() const {
        for (const auto &e : entries)
            if (!e.ok) return true;
        return false;
    }
};

inline std::string sweep_dir_name(double width_le, WellShape shape) {
    return shape == WellShape::one_sided ? "one_sided_W" + format_number(width_le) + "le"
                                         : "W2_" + format_number(width_le) + "le";
}

/// One run_evolve per W2 value, each in its own directory; failures are
/// recorded and the remaining runs continue. Writes summary.csv.
inline SweepSummary run_sweep(const SweepPlan &plan, const RunOptions &options) {
    plan.validate();
    SweepSummary summary;
    const double lambda = plan.base.compton_wavelength();

    std::vector<SweepEntry> jobs;
    for (double w : plan.left_widths) jobs.push_back({w, WellShape::two_sided});
    if (plan.one_sided_reference) jobs.push_back({plan.base.right_edge_width / lambda, WellShape::one_sided});

    for (SweepEntry job : jobs) {
        SimulationConfig cfg = plan.base;
        cfg.well_shape = job.shape;
        if (job.shape == WellShape::two_sided) cfg.left_edge_width = job.width_le * lambda;
        RunOptions run = options;
        run.out_dir = plan.out_dir / sweep_dir_name(job.width_le, job.shape);
        job.dir = run.out_dir;
        try {
            job.final_number = run_evolve(cfg, run).final_number;
            job.ok = true;
        } catch (const std::exception &e) {
            job.error = e.what();
        }
        summary.entries.push_back(job);
    }

    std::ostringstream csv;
    csv << "W2_over_lambda_e,N_final,well,status\n";
    for (const auto &e : summary.entries) {
        std::string status = e.ok ? "ok" : "failed: " + e.error;
        for (char &ch : status)
            if (ch == ',' || ch == '\n') ch = ';';
        csv << format_number(e.width_le) << ',' << (e.ok ? format_number(e.final_number) : "nan") << ','
            << to_string(e.shape) << ',' << status << '\n';
    }
    write_file_atomic(plan.out_dir / "summary.csv", csv.str());
    return summary;
}

inline SpectrumResult read_spectrum(const std::filesystem::path &path) {
    const CsvTable table = read_csv(path);
    const std::size_t mode_col = table.column("N_p");
    const std::size_t value_col = table.column("N");
    SpectrumResult out;
    for (const auto &row : table.rows) {
        out.modes.push_back(static_cast<long>(std::llround(row[mode_col])));
        out.occupation.push_back(row[value_col]);
    }
    for (std::size_t i = 1; i < out.modes.size(); ++i)
        if (out.modes[i] != out.modes[i - 1] + 1)
            throw std::runtime_error(path.string() + ": N_p must be consecutive and ascending");
    return out;
}

struct PeaksRequest {
    std::filesystem::path spectrum;
    std::filesystem::path out_dir = "out";
    int photons = 1;
    long first_mode = 0;
    long last_mode = 0;
    /// Matching tolerance in units of c^2.
    double tolerance = 0.06;
};

/// Bound states of the configured well, their n-photon predictions matched
/// against the peaks of a spectrum file. Writes matches.csv and unmatched.csv.
inline PeakMatchReport run_peaks(const SimulationConfig &config, const PeaksRequest &request) {
    const double c2 = config.c * config.c;
    const BoundStateSet bound = solve_bound_states({config.c, config.static_amplitude, config.well_width});
    const PeakPrediction predicted = predict_peaks(bound, config.omega, request.photons, config.box_length);
    const SpectrumResult spectrum = read_spectrum(request.spectrum);
    PeakDetectionOptions detect;
    detect.first_mode = request.first_mode;
    detect.last_mode = request.last_mode;
    const auto detected = detect_peaks(spectrum, detect);
    PeakMatchReport report =
        match_peaks(predicted.peaks, detected, request.tolerance * c2, config.c, config.box_length);

    std::vector<std::vector<double>> cols(8);
    for (const auto &r : report.rows) {
        cols[0].push_back(r.level);
        cols[1].push_back(r.photons);
        cols[2].push_back(r.bound_energy / c2);
        cols[3].push_back(r.predicted_energy / c2);
        cols[4].push_back(r.predicted_mode);
        cols[5].push_back(static_cast<double>(r.detected_mode));
        cols[6].push_back(r.detected_energy / c2);
        cols[7].push_back(r.gap / c2);
    }
    write_file_atomic(request.out_dir / "matches.csv",
                      render_csv({"i", "n", "E_i_c2", "E_predicted_c2", "Np_predicted", "Np_detected",
                                  "E_detected_c2", "gap_c2"},
                                 cols));

    std::ostringstream unmatched;
    unmatched << "kind,i,N_p,E_c2\n";
    for (const auto &p : report.unmatched_predicted)
        unmatched << "predicted," << p.level << ',' << format_number(p.mode) << ',' << format_number(p.energy / c2)
                  << '\n';
    for (const auto &d : report.unmatched_detected)
        unmatched << "detected,," << d.mode << ','
                  << format_number(mode_energy(static_cast<double>(d.mode), config.c, config.box_length) / c2) << '\n';
    write_file_atomic(request.out_dir / "unmatched.csv", unmatched.str());
    return report;
}

} // namespace sauter
