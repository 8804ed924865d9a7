#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "config.hpp"
#include "grid.hpp"

namespace sauter {

/// Sauter well profile in [-1, 0]: W2 shapes the left edge at -D/2, W1 the right edge at +D/2.
inline double shape_two_sided(double z, double D, double W1, double W2) {
    return 0.5 * (std::tanh((z - 0.5 * D) / W1) - std::tanh((z + 0.5 * D) / W2));
}

/// Single smoothed step in [0, 1] centred at z = 0.
inline double shape_one_sided(double z, double W) { return 0.5 * (1.0 + std::tanh(z / W)); }

/// Half-open gate: 1 on [a, b), 0 elsewhere.
inline int theta(double t, double a, double b) {
    if (a > b) throw std::invalid_argument("theta requires a <= b");
    return (t >= a && t < b) ? 1 : 0;
}

/// Turn-on / plateau / turn-off profile of the static well over [0, 2 t0 + t1].
inline double envelope(double t, double t0, double t1) {
    const double total = 2.0 * t0 + t1;
    if (t < 0.0 || t > total) throw std::domain_error("envelope evaluated outside [0, 2 t0 + t1]");
    constexpr double pi = std::numbers::pi;
    if (theta(t, 0.0, t0)) return std::sin(pi * t / (2.0 * t0));
    if (theta(t, t0, t0 + t1)) return 1.0;
    if (theta(t, t0 + t1, total)) return std::cos(pi * (t - t0 - t1) / (2.0 * t0));
    return 0.0;
}

/// A scalar potential of the form V(z_j, t) = shape_j * amplitude(t).
template <class F>
concept SeparableField = requires(const F &f, double t) {
    { f.shape() } -> std::convertible_to<std::span<const double>>;
    { f.amplitude(t) } -> std::convertible_to<double>;
};

/// The driven well: V1 S(z) f(t) + V2 sin(omega t) S(z) theta(t; t0, t0 + t1).
class FieldSampler {
  public:
    FieldSampler(const SimulationConfig &config, const Grid &grid)
        : static_amplitude_(config.static_amplitude), oscillating_amplitude_(config.oscillating_amplitude),
          omega_(config.omega), ramp_time_(config.ramp_time), oscillation_time_(config.oscillation_time),
          shape_kind_(config.well_shape) {
        shape_.reserve(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double z = grid.position(j);
            shape_.push_back(shape_kind_ == WellShape::two_sided
                                 ? shape_two_sided(z, config.well_width, config.right_edge_width,
                                                   config.left_edge_width)
                                 : shape_one_sided(z, config.right_edge_width));
        }
    }

    std::span<const double> shape() const noexcept { return shape_; }
    WellShape well_shape() const noexcept { return shape_kind_; }
    double total_time() const noexcept { return 2.0 * ramp_time_ + oscillation_time_; }

    /// Spatially uniform factor multiplying the shape at time t.
    double amplitude(double t) const {
        const double ramp = envelope(t, ramp_time_, oscillation_time_);
        const int gate = theta(t, ramp_time_, ramp_time_ + oscillation_time_);
        return static_amplitude_ * ramp + (gate ? oscillating_amplitude_ * std::sin(omega_ * t) : 0.0);
    }

    double potential(std::size_t j, double t) const { return shape_.at(j) * amplitude(t); }

  private:
    double static_amplitude_;
    double oscillating_amplitude_;
    double omega_;
    double ramp_time_;
    double oscillation_time_;
    WellShape shape_kind_;
    std::vector<double> shape_;
};

/// Time-independent V1 S(z), switched on from t = 0. Used for oracle comparisons.
class StaticField {
  public:
    StaticField(const SimulationConfig &config, const Grid &grid)
        : amplitude_(config.static_amplitude) {
        const FieldSampler sampler(config, grid);
        shape_.assign(sampler.shape().begin(), sampler.shape().end());
    }

    std::span<const double> shape() const noexcept { return shape_; }
    double amplitude(double) const noexcept { return amplitude_; }
    double potential(std::size_t j, double) const { return shape_.at(j) * amplitude_; }

  private:
    double amplitude_;
    std::vector<double> shape_;
};

static_assert(SeparableField<FieldSampler>);
static_assert(SeparableField<StaticField>);

} // namespace sauter
