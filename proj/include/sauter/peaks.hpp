#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "bound_states.hpp"
#include "observables.hpp"

namespace sauter {

/// Continuum energy reached from level i after absorbing n quanta: E_i + n omega.
struct PredictedPeak {
    int level; // 1-based, ascending energy
    int photons;
    double bound_energy;
    double energy;
    double mode;
};

struct PeakPrediction {
    std::vector<PredictedPeak> peaks;
    /// Levels whose E_i + n omega stays below the continuum threshold c^2.
    std::size_t omitted = 0;
};

inline PeakPrediction predict_peaks(const BoundStateSet &bound, double omega, int photons, double box_length) {
    if (photons < 0) throw std::invalid_argument("photon number must be non-negative");
    const double c = bound.c;
    PeakPrediction out;
    for (std::size_t i = 0; i < bound.energies.size(); ++i) {
        const double e = bound.energies[i] + photons * omega;
        if (e <= c * c) {
            ++out.omitted;
            continue;
        }
        out.peaks.push_back({static_cast<int>(i) + 1, photons, bound.energies[i], e, energy_to_mode(e, c, box_length)});
    }
    return out;
}

struct DetectedPeak {
    long mode;
    double height;
};

struct PeakDetectionOptions {
    long first_mode;
    long last_mode;
    /// Half-width of the local-maximum window, in modes.
    long window = 2;
    /// Minimum height as a multiple of the spectrum median over the scanned half-axis.
    double median_factor = 5.0;
};

inline double median_over(const SpectrumResult &spectrum, long first, long last) {
    std::vector<double> values;
    for (long k = first; k <= last; ++k) values.push_back(spectrum.at(k));
    if (values.empty()) return 0.0;
    const auto mid = values.begin() + static_cast<long>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

/// Modes N_p >= 0 for a range starting at or above zero, N_p <= 0 for one
/// ending at or below zero, otherwise the whole axis.
inline std::pair<long, long> half_axis(const SpectrumResult &spectrum, long first, long last) {
    if (first >= 0) return {0, spectrum.modes.back()};
    if (last <= 0) return {spectrum.modes.front(), 0};
    return {spectrum.modes.front(), spectrum.modes.back()};
}

/// Local maxima within the mode range, sorted by mode. A mode qualifies when it
/// strictly exceeds the `window` modes to its left, is not exceeded by the
/// `window` modes to its right, and reaches median_factor times the median of
/// the half-axis being scanned.
inline std::vector<DetectedPeak> detect_peaks(const SpectrumResult &spectrum, const PeakDetectionOptions &options) {
    if (spectrum.modes.empty()) throw std::invalid_argument("empty spectrum");
    if (options.first_mode > options.last_mode) throw std::invalid_argument("empty peak scan range");
    const long first = std::max(options.first_mode, spectrum.modes.front());
    const long last = std::min(options.last_mode, spectrum.modes.back());
    const auto [axis_first, axis_last] = half_axis(spectrum, first, last);
    const double threshold = options.median_factor * median_over(spectrum, axis_first, axis_last);
    std::vector<DetectedPeak> out;
    for (long k = first; k <= last; ++k) {
        const double h = spectrum.at(k);
        if (h < threshold) continue;
        bool is_peak = true;
        for (long d = 1; d <= options.window && is_peak; ++d) {
            if (!(h > spectrum.at(k - d))) is_peak = false;
            if (h < spectrum.at(k + d)) is_peak = false;
        }
        if (is_peak) out.push_back({k, h});
    }
    return out;
}

struct PeakMatchRow {
    int level;
    int photons;
    double bound_energy;
    double predicted_energy;
    double predicted_mode;
    long detected_mode;
    double detected_energy;
    /// detected_energy - bound_energy - photons * omega
    double gap;
};

struct PeakMatchReport {
    std::vector<PeakMatchRow> rows;
    std::vector<PredictedPeak> unmatched_predicted;
    std::vector<DetectedPeak> unmatched_detected;
};

/// Greedy nearest-energy assignment: candidate pairs within `tolerance` are
/// taken in order of increasing |gap|, each prediction and detection used once.
inline PeakMatchReport match_peaks(const std::vector<PredictedPeak> &predicted, const std::vector<DetectedPeak> &detected,
                                   double tolerance, double c, double box_length) {
    if (!(tolerance > 0.0)) throw std::invalid_argument("matching tolerance must be positive");
    std::vector<double> detected_energy;
    for (const auto &d : detected) detected_energy.push_back(mode_energy(static_cast<double>(d.mode), c, box_length));

    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        for (std::size_t j = 0; j < detected.size(); ++j) {
            const double gap = std::abs(detected_energy[j] - predicted[i].energy);
            if (gap <= tolerance) candidates.emplace_back(gap, i, j);
        }
    std::sort(candidates.begin(), candidates.end());

    std::vector<bool> used_p(predicted.size(), false);
    std::vector<bool> used_d(detected.size(), false);
    PeakMatchReport report;
    for (const auto &[gap, i, j] : candidates) {
        if (used_p[i] || used_d[j]) continue;
        used_p[i] = used_d[j] = true;
        const auto &p = predicted[i];
        report.rows.push_back({p.level, p.photons, p.bound_energy, p.energy, p.mode, detected[j].mode,
                               detected_energy[j], detected_energy[j] - p.energy});
    }
    std::sort(report.rows.begin(), report.rows.end(),
              [](const PeakMatchRow &a, const PeakMatchRow &b) { return a.level < b.level; });
    for (std::size_t i = 0; i < predicted.size(); ++i)
        if (!used_p[i]) report.unmatched_predicted.push_back(predicted[i]);
    for (std::size_t j = 0; j < detected.size(); ++j)
        if (!used_d[j]) report.unmatched_detected.push_back(detected[j]);
    return report;
}

} // namespace sauter
