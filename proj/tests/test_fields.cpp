#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sauter/config.hpp"
#include "sauter/fields.hpp"
#include "sauter/grid.hpp"

using namespace sauter;

namespace {

constexpr double c = 137.036;
constexpr double pi = std::numbers::pi;

} // namespace

TEST(Shape, TwoSidedValues) {
    const double D = 10 / c, W = 0.3 / c;
    EXPECT_NEAR(shape_two_sided(0.0, D, W, W), -std::tanh(D / (2 * W)), 1e-15);
    EXPECT_NEAR(shape_two_sided(0.0, D, W, W), -1.0, 1e-12);
    EXPECT_NEAR(shape_two_sided(D / 2, D, W, W), -0.5, 1e-12);
    EXPECT_NEAR(shape_two_sided(-D / 2, D, W, W), -0.5, 1e-12);
    EXPECT_LT(std::abs(shape_two_sided(1.0, D, W, W)), 1e-6);
    EXPECT_LT(std::abs(shape_two_sided(-1.0, D, W, W)), 1e-6);
}

TEST(Shape, TwoSidedRangeAndMirror) {
    const double D = 10 / c, W = 0.3 / c;
    for (int i = 0; i <= 4000; ++i) {
        const double z = -1.0 + i * 0.0005;
        const double s = shape_two_sided(z, D, W, W);
        EXPECT_GE(s, -1.0);
        EXPECT_LE(s, 0.0);
        EXPECT_NEAR(s, shape_two_sided(-z, D, W, W), 1e-12);
    }
}

TEST(Shape, LeftWidthOnlyTouchesLeftEdge) {
    const double D = 10 / c, W1 = 0.3 / c;
    for (double W2 : {0.075 / c, 1.5 / c}) {
        EXPECT_NEAR(shape_two_sided(D / 2, D, W1, W2), -0.5 * std::tanh(D / W2), 1e-15);
        EXPECT_NEAR(shape_two_sided(-D / 2, D, W1, W2), -0.5 * std::tanh(D / W1), 1e-15);
    }
    auto steepest = [&](double W2) {
        double best = 0.0;
        const double h = 1e-6;
        for (int i = 0; i <= 20000; ++i) {
            const double z = -D / 2 - 0.02 + i * 2e-6;
            best = std::max(best, std::abs(shape_two_sided(z + h, D, W1, W2) - shape_two_sided(z - h, D, W1, W2)) / (2 * h));
        }
        return best;
    };
    double previous = 0.0;
    for (double w : {1.5, 0.6, 0.3, 0.15, 0.075}) {
        const double s = steepest(w / c);
        EXPECT_GT(s, previous);
        previous = s;
    }
}

TEST(Shape, OneSidedValues) {
    const double W = 0.3 / c;
    EXPECT_DOUBLE_EQ(shape_one_sided(0.0, W), 0.5);
    EXPECT_NEAR(shape_one_sided(1.0, W), 1.0, 1e-12);
    EXPECT_NEAR(shape_one_sided(-1.0, W), 0.0, 1e-12);
    for (int i = 0; i < 100; ++i) {
        const double z = -0.05 + i * 0.001;
        EXPECT_GE(shape_one_sided(z, W), 0.0);
        EXPECT_LE(shape_one_sided(z, W), 1.0);
    }
}

TEST(Theta, HalfOpen) {
    EXPECT_EQ(theta(0.5, 0.0, 1.0), 1);
    EXPECT_EQ(theta(0.0, 0.0, 1.0), 1);
    EXPECT_EQ(theta(1.0, 0.0, 1.0), 0);
    EXPECT_EQ(theta(-0.1, 0.0, 1.0), 0);
    EXPECT_EQ(theta(1.0, 1.0, 1.0), 0);
    EXPECT_THROW(theta(0.0, 2.0, 1.0), std::invalid_argument);
}

TEST(Envelope, Pieces) {
    const double t0 = 5 / (c * c), t1 = 20 * pi / (c * c), T = 2 * t0 + t1;
    EXPECT_EQ(envelope(0.0, t0, t1), 0.0);
    EXPECT_NEAR(envelope(t0 / 2, t0, t1), std::sin(pi / 4), 1e-15);
    EXPECT_EQ(envelope(t0, t0, t1), 1.0);
    EXPECT_EQ(envelope(t0 + t1 / 2, t0, t1), 1.0);
    EXPECT_NEAR(envelope(t0 + t1, t0, t1), 1.0, 1e-15);
    EXPECT_NEAR(envelope(T, t0, t1), 0.0, 1e-15);
    EXPECT_THROW(envelope(-1e-9, t0, t1), std::domain_error);
    EXPECT_THROW(envelope(T * 1.001, t0, t1), std::domain_error);
}

TEST(Envelope, ContinuousAndBounded) {
    const double t0 = 5 / (c * c), t1 = 20 * pi / (c * c), T = 2 * t0 + t1;
    double prev = envelope(0.0, t0, t1);
    const int n = 200000;
    for (int i = 1; i <= n; ++i) {
        const double f = envelope(T * i / n, t0, t1);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
        EXPECT_LT(std::abs(f - prev), 1e-3);
        prev = f;
    }
}

TEST(FieldSampler, PotentialAtKeyTimes) {
    SimulationConfig cfg;
    cfg.grid_points = 256;
    const Grid grid = build_grid(cfg);
    const FieldSampler field(cfg, grid);
    const double V1 = cfg.static_amplitude, V2 = cfg.oscillating_amplitude;
    for (std::size_t j = 0; j < grid.size(); j += 17) EXPECT_EQ(field.potential(j, 0.0), 0.0);

    const double t_ramp = 0.4 * cfg.ramp_time;
    const double t_peak = (pi / 2 + 4 * pi) / cfg.omega;
    ASSERT_GT(t_peak, cfg.ramp_time);
    ASSERT_LT(t_peak, cfg.ramp_time + cfg.oscillation_time);
    for (std::size_t j = 0; j < grid.size(); j += 5) {
        const double S = shape_two_sided(grid.position(j), cfg.well_width, cfg.right_edge_width, cfg.left_edge_width);
        EXPECT_NEAR(field.potential(j, t_ramp), V1 * S * std::sin(pi * 0.2), 1e-9);
        EXPECT_NEAR(field.potential(j, t_peak), (V1 + V2) * S, 1e-7 * (V1 + V2));
    }
    EXPECT_THROW(field.amplitude(cfg.total_time() * 1.01), std::domain_error);
}

TEST(FieldSampler, OneSidedUsesRightWidth) {
    SimulationConfig cfg;
    cfg.grid_points = 64;
    cfg.well_shape = WellShape::one_sided;
    cfg.left_edge_width = 1.5 / c;
    const Grid grid = build_grid(cfg);
    const FieldSampler field(cfg, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        EXPECT_DOUBLE_EQ(field.shape()[j], shape_one_sided(grid.position(j), 0.3 / c));
}

TEST(FieldSampler, StaticFieldIsConstant) {
    SimulationConfig cfg;
    cfg.grid_points = 32;
    const Grid grid = build_grid(cfg);
    const StaticField field(cfg, grid);
    const FieldSampler driven(cfg, grid);
    EXPECT_EQ(field.amplitude(0.0), cfg.static_amplitude);
    EXPECT_EQ(field.amplitude(1.0), cfg.static_amplitude);
    for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_EQ(field.shape()[j], driven.shape()[j]);
}
