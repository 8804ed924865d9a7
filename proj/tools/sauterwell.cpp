// Command-line front end: bound-states, evolve, sweep, peaks.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 numerical abort, 4 partial sweep failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sauter/bound_states.hpp"
#include "sauter/config.hpp"
#include "sauter/errors.hpp"
#include "sauter/run.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kNumericalAbort = 3, kPartialSweep = 4 };

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::string> well;
    std::optional<std::string> nz;
    std::optional<std::string> nt;
    std::optional<std::string> stride;
    unsigned threads = 0;
};

void add_config_flags(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "Configuration file (key = value)");
    cmd->add_option("--out", flags.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--well", flags.well, "Well shape: two-sided or one-sided");
    cmd->add_option("--Nz", flags.nz, "Number of grid points (power of two)");
    cmd->add_option("--Nt", flags.nt, "Number of time steps");
    cmd->add_option("--sample-stride", flags.stride, "Steps between N(t) samples");
    cmd->add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
}

sauter::SimulationConfig resolve(const CommonFlags &flags, sauter::ConfigOverrides extra = {}) {
    sauter::ConfigOverrides overrides;
    if (flags.well) overrides.emplace_back("well_shape", *flags.well);
    if (flags.nz) overrides.emplace_back("Nz", *flags.nz);
    if (flags.nt) overrides.emplace_back("Nt", *flags.nt);
    if (flags.stride) overrides.emplace_back("sample_stride", *flags.stride);
    overrides.insert(overrides.end(), extra.begin(), extra.end());
    if (flags.config_path.empty()) return sauter::parse_config("", overrides);
    return sauter::load_config(flags.config_path, overrides);
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

double parse_width_le(const std::string &text, double c) {
    return sauter::detail::parse_length(text, c, "W2") * c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Pair creation in Sauter potential wells via split-operator Dirac propagation"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto *bound_cmd = app.add_subcommand("bound-states", "Print the bound-state ladder of the configured well");
    bound_cmd->add_option("--config", flags.config_path, "Configuration file (key = value)");

    auto *evolve_cmd = app.add_subcommand("evolve", "Run one simulation and write its observables");
    add_config_flags(evolve_cmd, flags);
    std::optional<std::string> w2;
    std::string density_times;
    bool checkpoints = false;
    evolve_cmd->add_option("--W2", w2, "Left edge width (suffix 'le' for units of lambda_e)");
    evolve_cmd->add_option("--density-times", density_times, "Extra density snapshot times t1,t2,...");
    evolve_cmd->add_flag("--checkpoint", checkpoints, "Dump U_pn in binary checkpoint format");

    auto *sweep_cmd = app.add_subcommand("sweep", "Run the W2 sweep and write summary.csv");
    add_config_flags(sweep_cmd, flags);
    std::string sweep_widths;
    bool one_sided_reference = false;
    sweep_cmd->add_option("--W2", sweep_widths, "Comma-separated W2 values (default 0.075le,...,1.5le)");
    sweep_cmd->add_flag("--one-sided-reference", one_sided_reference, "Also run the one-sided well with W = W1");

    auto *peaks_cmd = app.add_subcommand("peaks", "Match spectrum peaks against E_i + n omega");
    peaks_cmd->add_option("--config", flags.config_path, "Configuration file (key = value)");
    peaks_cmd->add_option("--out", flags.out_dir, "Directory for matches.csv")->capture_default_str();
    std::string spectrum_path;
    std::string range = "0:0";
    int photons = 1;
    double tolerance = 0.06;
    peaks_cmd->add_option("spectrum", spectrum_path, "spectrum.csv to scan (default OUT/spectrum.csv)");
    peaks_cmd->add_option("--range", range, "Mode range a:b to scan")->required();
    peaks_cmd->add_option("--n-photons", photons, "Photon number n")->capture_default_str();
    peaks_cmd->add_option("--tol", tolerance, "Matching tolerance in units of c^2")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bound_cmd) {
            const auto cfg = resolve(flags);
            const auto bound = sauter::solve_bound_states({cfg.c, cfg.static_amplitude, cfg.well_width});
            const double c2 = cfg.c * cfg.c;
            std::printf("%-3s %18s %12s\n", "i", "E (a.u.)", "E / c^2");
            for (std::size_t i = 0; i < bound.energies.size(); ++i)
                std::printf("%-3zu %18.6f %12.6f\n", i + 1, bound.energies[i], bound.energies[i] / c2);
            std::printf("%zu bound states\n", bound.energies.size());
            return kOk;
        }
        if (*evolve_cmd) {
            const auto cfg = resolve(flags, w2 ? sauter::ConfigOverrides{{"W2", *w2}} : sauter::ConfigOverrides{});
            sauter::RunOptions options;
            options.out_dir = flags.out_dir;
            options.threads = flags.threads;
            options.write_checkpoints = checkpoints;
            for (const auto &t : split(density_times, ','))
                options.density_times.push_back(sauter::detail::parse_real(t, "--density-times"));
            const auto summary = sauter::run_evolve(cfg, options);
            std::printf("evolve: N(T) = %.9g, written to %s\n", summary.final_number, flags.out_dir.c_str());
            return kOk;
        }
        if (*sweep_cmd) {
            sauter::SweepPlan plan;
            plan.base = resolve(flags);
            plan.out_dir = flags.out_dir;
            plan.one_sided_reference = one_sided_reference;
            if (!sweep_widths.empty()) {
                plan.left_widths.clear();
                for (const auto &w : split(sweep_widths, ',')) plan.left_widths.push_back(parse_width_le(w, plan.base.c));
            }
            sauter::RunOptions options;
            options.threads = flags.threads;
            const auto summary = sauter::run_sweep(plan, options);
            std::size_t ok = 0;
            for (const auto &e : summary.entries) ok += e.ok ? 1 : 0;
            std::printf("sweep: %zu/%zu runs completed, summary in %s/summary.csv\n", ok, summary.entries.size(),
                        flags.out_dir.c_str());
            return summary.partial_failure() ? kPartialSweep : kOk;
        }
        if (*peaks_cmd) {
            const auto cfg = resolve(flags);
            sauter::PeaksRequest request;
            request.out_dir = flags.out_dir;
            request.spectrum = spectrum_path.empty() ? std::filesystem::path(flags.out_dir) / "spectrum.csv"
                                                     : std::filesystem::path(spectrum_path);
            request.photons = photons;
            request.tolerance = tolerance;
            const auto bounds = split(range, ':');
            if (bounds.size() != 2) throw sauter::ConfigError("--range expects a:b");
            request.first_mode = std::stol(bounds[0]);
            request.last_mode = std::stol(bounds[1]);
            const auto report = sauter::run_peaks(cfg, request);
            std::printf("peaks: %zu matched, %zu predicted unmatched, %zu detected unmatched\n", report.rows.size(),
                        report.unmatched_predicted.size(), report.unmatched_detected.size());
            return kOk;
        }
    } catch (const sauter::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const sauter::NumericalAbort &e) {
        std::cerr << "numerical abort (mode " << e.mode() << "): " << e.what() << "\n";
        return kNumericalAbort;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
