#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sauter {

/// Speed of light in atomic units.
inline constexpr double kSpeedOfLight = 137.036;

enum class WellShape { two_sided, one_sided };

inline std::string to_string(WellShape shape) {
    return shape == WellShape::two_sided ? "two_sided" : "one_sided";
}

/// All physical and numerical parameters of one run, in atomic units.
///
/// Defaults reproduce the reference setup: a 10 lambda_e wide well of depth
/// 2c^2 - 10000 with 0.3 lambda_e edges, driven at 2.1 c^2 on a box of
/// length 2 sampled with 2048 points and 10^4 steps.
struct SimulationConfig {
    double c = kSpeedOfLight;
    double box_length = 2.0;
    std::size_t grid_points = 2048;
    std::size_t time_steps = 10000;
    double static_amplitude = 2.0 * kSpeedOfLight * kSpeedOfLight - 10000.0;
    double oscillating_amplitude = 2.0 * kSpeedOfLight * kSpeedOfLight - 10000.0;
    double omega = 2.1 * kSpeedOfLight * kSpeedOfLight;
    double well_width = 10.0 / kSpeedOfLight;
    double right_edge_width = 0.3 / kSpeedOfLight;
    double left_edge_width = 0.3 / kSpeedOfLight;
    double ramp_time = 5.0 / (kSpeedOfLight * kSpeedOfLight);
    double oscillation_time = 20.0 * std::numbers::pi / (kSpeedOfLight * kSpeedOfLight);
    WellShape well_shape = WellShape::two_sided;
    /// Steps between observable samples; 0 resolves to time_steps / 50.
    std::size_t sample_stride = 0;

    /// Defaults with every c-dependent quantity derived from `c`.
    static SimulationConfig defaults_for(double c) {
        SimulationConfig cfg;
        const double c2 = c * c;
        cfg.c = c;
        cfg.static_amplitude = 2.0 * c2 - 10000.0;
        cfg.oscillating_amplitude = 2.0 * c2 - 10000.0;
        cfg.omega = 2.1 * c2;
        cfg.well_width = 10.0 / c;
        cfg.right_edge_width = 0.3 / c;
        cfg.left_edge_width = 0.3 / c;
        cfg.ramp_time = 5.0 / c2;
        cfg.oscillation_time = 20.0 * std::numbers::pi / c2;
        return cfg;
    }

    double compton_wavelength() const { return 1.0 / c; }
    double total_time() const { return 2.0 * ramp_time + oscillation_time; }
    double time_step() const { return total_time() / static_cast<double>(time_steps); }

    std::size_t resolved_sample_stride() const {
        if (sample_stride != 0) return sample_stride;
        return std::max<std::size_t>(1, time_steps / 50);
    }

    /// True when light-speed signals cannot wrap around the periodic box during a run.
    bool wraparound_safe() const { return c * total_time() < box_length / 2.0; }

    /// Throws ConfigError naming the first violated invariant.
    void validate() const {
        auto positive = [](double v, const char *key) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(key) + " must be positive and finite");
        };
        positive(c, "c");
        positive(box_length, "L");
        positive(well_width, "D");
        positive(right_edge_width, "W1");
        positive(left_edge_width, "W2");
        positive(ramp_time, "t0");
        positive(oscillation_time, "t1");
        if (!std::isfinite(static_amplitude)) throw ConfigError("V1 must be finite");
        if (!std::isfinite(oscillating_amplitude)) throw ConfigError("V2 must be finite");
        if (!std::isfinite(omega)) throw ConfigError("omega must be finite");
        if (grid_points < 2 || (grid_points & (grid_points - 1)) != 0)
            throw ConfigError("Nz must be a power of two (got " + std::to_string(grid_points) + ")");
        if (time_steps < 1) throw ConfigError("Nt must be at least 1");
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_real(std::string_view text, const std::string &key) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("cannot parse value '" + std::string(text) + "' for key " + key);
    return value;
}

inline std::size_t parse_count(std::string_view text, const std::string &key) {
    text = trim(text);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw ConfigError("cannot parse integer '" + std::string(text) + "' for key " + key);
    return value;
}

/// Length value with optional "le" suffix meaning multiples of lambda_e = 1/c.
inline double parse_length(std::string_view text, double c, const std::string &key) {
    text = trim(text);
    if (text.size() > 2 && text.substr(text.size() - 2) == "le")
        return parse_real(text.substr(0, text.size() - 2), key) / c;
    return parse_real(text, key);
}

inline WellShape parse_shape(std::string_view text) {
    text = trim(text);
    if (text == "two_sided" || text == "two-sided") return WellShape::two_sided;
    if (text == "one_sided" || text == "one-sided") return WellShape::one_sided;
    throw ConfigError("well_shape must be two_sided or one_sided (got '" + std::string(text) + "')");
}

inline const std::vector<std::string> &config_keys() {
    static const std::vector<std::string> keys = {"c",  "L",  "Nz", "Nt", "V1", "V2",         "omega",
                                                  "D",  "W1", "W2", "t0", "t1", "well_shape", "sample_stride"};
    return keys;
}

} // namespace detail

/// Ordered key/value assignments; later entries win.
using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Parses flat `key = value` text ('#' starts a comment), applies overrides,
/// fills c-dependent defaults from the resolved c and validates the result.
inline SimulationConfig parse_config(std::string_view text, const ConfigOverrides &overrides = {}) {
    std::map<std::string, std::string> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        raw[std::string(detail::trim(view.substr(0, eq)))] = std::string(detail::trim(view.substr(eq + 1)));
    }
    for (const auto &[key, value] : overrides) raw[key] = value;

    const auto &known = detail::config_keys();
    for (const auto &[key, value] : raw)
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ConfigError("unknown configuration key '" + key + "'");

    const double c = raw.count("c") ? detail::parse_real(raw["c"], "c") : kSpeedOfLight;
    if (!(c > 0.0)) throw ConfigError("c must be positive and finite");
    SimulationConfig cfg = SimulationConfig::defaults_for(c);

    for (const auto &[key, value] : raw) {
        if (key == "c") continue;
        if (key == "L") cfg.box_length = detail::parse_length(value, c, key);
        else if (key == "Nz") cfg.grid_points = detail::parse_count(value, key);
        else if (key == "Nt") cfg.time_steps = detail::parse_count(value, key);
        else if (key == "V1") cfg.static_amplitude = detail::parse_real(value, key);
        else if (key == "V2") cfg.oscillating_amplitude = detail::parse_real(value, key);
        else if (key == "omega") cfg.omega = detail::parse_real(value, key);
        else if (key == "D") cfg.well_width = detail::parse_length(value, c, key);
        else if (key == "W1") cfg.right_edge_width = detail::parse_length(value, c, key);
        else if (key == "W2") cfg.left_edge_width = detail::parse_length(value, c, key);
        else if (key == "t0") cfg.ramp_time = detail::parse_real(value, key);
        else if (key == "t1") cfg.oscillation_time = detail::parse_real(value, key);
        else if (key == "well_shape") cfg.well_shape = detail::parse_shape(value);
        else if (key == "sample_stride") cfg.sample_stride = detail::parse_count(value, key);
    }
    cfg.validate();
    return cfg;
}

inline SimulationConfig load_config(const std::string &path, const ConfigOverrides &overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

} // namespace sauter
