#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sauter/errors.hpp"
#include "sauter/fields.hpp"
#include "sauter/fourier.hpp"
#include "sauter/free_basis.hpp"
#include "sauter/observables.hpp"
#include "sauter/propagator.hpp"
#include "support.hpp"

using namespace sauter;

namespace {

constexpr double c = 137.036;

SpinorField negative_plane_wave_in_position(const FreeBasis &basis, long k) {
    return to_position(plane_wave_state(basis, k, Branch::negative), basis.grid());
}

EvolutionSchedule every_sample_is_a_matrix(EvolutionSchedule s) {
    s.matrix_steps = s.sample_steps;
    return s;
}

} // namespace

TEST(KineticPhase, RestModeIsDiagonal) {
    const FreeBasis basis(Grid(2.0, 64), c);
    const double dt = 1e-5;
    const Matrix2 k = kinetic_phase(basis, 0, dt);
    EXPECT_LT(std::abs(k[0][0] - std::polar(1.0, -c * c * dt)), 1e-15);
    EXPECT_LT(std::abs(k[1][1] - std::polar(1.0, c * c * dt)), 1e-15);
    EXPECT_LT(std::abs(k[0][1]), 1e-15);
    EXPECT_LT(std::abs(k[1][0]), 1e-15);
}

TEST(KineticPhase, UnitaryAndDiagonalInFreeBasis) {
    const FreeBasis basis(Grid(2.0, 2048), c);
    const double dt = 3.878e-7;
    double worst_unitary = 0.0, worst_eigen = 0.0;
    for (const FreeMode &m : basis.modes()) {
        const Matrix2 k = kinetic_phase(basis, m.index, dt);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const complex g = std::conj(k[0][a]) * k[0][b] + std::conj(k[1][a]) * k[1][b];
                worst_unitary = std::max(worst_unitary, std::abs(g - (a == b ? 1.0 : 0.0)));
            }
        const Spinor u{m.positive[0], m.positive[1]};
        const Spinor v{m.negative[0], m.negative[1]};
        const Spinor ku = multiply(k, u), kv = multiply(k, v);
        const complex eu = std::polar(1.0, -m.energy * dt), ev = std::polar(1.0, m.energy * dt);
        for (int r = 0; r < 2; ++r)
            worst_eigen = std::max({worst_eigen, std::abs(ku[r] - eu * u[r]), std::abs(kv[r] - ev * v[r])});
    }
    EXPECT_LT(worst_unitary, 1e-14);
    EXPECT_LT(worst_eigen, 1e-14);
    EXPECT_THROW(kinetic_phase(basis, 0, -1.0), std::invalid_argument);
}

TEST(SplitStep, FreePositiveWaveAcquiresPhase) {
    const SimulationConfig cfg = support::field_free_config(128, 100);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const double dt = cfg.time_step();
    for (long k : {-30L, 0L, 17L}) {
        const SpinorField start = to_position(plane_wave_state(basis, k, Branch::positive), basis.grid());
        const SpinorField out = to_momentum(split_step(start, 0.0, dt, field, basis), basis.grid());
        const FreeMode &m = basis.mode(k);
        const complex phase = std::polar(1.0, -m.energy * dt);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const bool hit = basis.grid().mode(i) == k;
            for (int s = 0; s < 2; ++s) {
                const complex expect = hit ? phase * m.positive[s] : complex(0.0);
                EXPECT_LT(std::abs(out[i][s] - expect), 1e-12);
            }
        }
    }
}

TEST(SplitStep, ZeroStepIsIdentity) {
    const SimulationConfig cfg = support::reduced_config(64, 100);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const SpinorField psi = support::random_field(Representation::position, basis.grid(), 11);
    const SpinorField out = split_step(psi, 1e-3, 0.0, field, basis);
    for (std::size_t j = 0; j < psi.size(); ++j)
        for (int s = 0; s < 2; ++s) EXPECT_LT(std::abs(out[j][s] - psi[j][s]), 1e-14);
}

TEST(SplitStep, PreservesNorm) {
    const SimulationConfig cfg = support::reduced_config(128, 200);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    SpinorField psi = support::random_field(Representation::position, basis.grid(), 5);
    const double n0 = psi.norm_squared();
    for (int s = 0; s < 200; ++s) {
        psi = split_step(psi, s * cfg.time_step(), cfg.time_step(), field, basis);
        ASSERT_NEAR(psi.norm_squared() / n0, 1.0, 1e-12);
    }
    EXPECT_THROW(split_step(to_momentum(psi, basis.grid()), 0.0, cfg.time_step(), field, basis),
                 std::invalid_argument);
}

TEST(Schedule, SamplesAndDensityTimes) {
    SimulationConfig cfg = support::reduced_config(64, 1000);
    EvolutionSchedule s = make_schedule(cfg);
    ASSERT_EQ(s.sample_steps.size(), 51u);
    EXPECT_EQ(s.sample_steps.front(), 0u);
    EXPECT_EQ(s.sample_steps[1], 20u);
    EXPECT_EQ(s.sample_steps.back(), 1000u);
    EXPECT_EQ(s.matrix_steps, std::vector<std::size_t>{1000});
    EXPECT_NEAR(s.time(1000), cfg.total_time(), 1e-18);

    const std::vector<double> times = {cfg.total_time() / 2, 0.0, cfg.total_time() / 2 + 1e-9};
    s = make_schedule(cfg, times);
    EXPECT_EQ(s.density_steps, (std::vector<std::size_t>{0, 500, 1000}));
    const std::vector<double> bad = {-1.0};
    EXPECT_THROW(make_schedule(cfg, bad), ConfigError);

    cfg.time_steps = 7;
    s = make_schedule(cfg);
    EXPECT_EQ(s.sample_steps, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(Evolve, FieldFreeCreatesNothing) {
    const SimulationConfig cfg = support::field_free_config(64, 100);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionResult r = evolve_all(basis, field, every_sample_is_a_matrix(make_schedule(cfg)));
    for (double n : r.timeseries.numbers) EXPECT_LT(n, 1e-20);
    for (const auto &u : r.matrices)
        for (const complex &z : u.data()) EXPECT_LT(std::abs(z), 1e-10);
}

TEST(Evolve, InitialMatrixIsExactlyZero) {
    const SimulationConfig cfg = support::reduced_config(64, 10);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionResult r = evolve_all(basis, field, every_sample_is_a_matrix(make_schedule(cfg)));
    ASSERT_EQ(r.matrices.front().step(), 0u);
    for (const complex &z : r.matrices.front().data()) EXPECT_EQ(std::abs(z), 0.0);
    EXPECT_EQ(r.timeseries.numbers.front(), 0.0);
}

TEST(Evolve, MatchesSingleStatePropagation) {
    const SimulationConfig cfg = support::reduced_config(32, 60);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionResult r = evolve_all(basis, field, make_schedule(cfg));
    const TransitionMatrix &u = r.matrices.back();
    const Grid &g = basis.grid();
    for (long n : {-16L, -3L, 0L, 9L, 15L}) {
        SpinorField psi = propagate(negative_plane_wave_in_position(basis, n), field, basis, cfg.time_step(),
                                    cfg.time_steps);
        const SpinorField mom = to_momentum(psi, g);
        for (std::size_t p = 0; p < g.size(); ++p) {
            const complex expect = project(basis.at_slot(p).positive, mom[p]);
            EXPECT_LT(std::abs(u(p, g.slot(n)) - expect), 1e-10) << "p slot " << p << " n " << n;
        }
    }
}

TEST(Evolve, DeterministicAcrossThreadCounts) {
    const SimulationConfig cfg = support::reduced_config(64, 200);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionSchedule s = make_schedule(cfg);
    EvolveOptions one, three;
    one.threads = 1;
    three.threads = 3;
    const EvolutionResult a = evolve_all(basis, field, s, one);
    const EvolutionResult b = evolve_all(basis, field, s, three);
    const EvolutionResult again = evolve_all(basis, field, s, one);
    EXPECT_EQ(a.timeseries.numbers, b.timeseries.numbers);
    EXPECT_EQ(a.timeseries.numbers, again.timeseries.numbers);
    EXPECT_EQ(a.densities.back().density, b.densities.back().density);
    for (std::size_t i = 0; i < a.matrices.back().data().size(); ++i)
        ASSERT_EQ(a.matrices.back().data()[i], b.matrices.back().data()[i]);
}

TEST(Evolve, CompletenessAndStepNorm) {
    const SimulationConfig cfg = support::reduced_config(128, 500);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    EvolveOptions opts;
    opts.track_step_norm = true;
    const EvolutionResult r = evolve_all(basis, field, make_schedule(cfg), opts);
    EXPECT_LT(r.max_completeness_error, 1e-8);
    EXPECT_LT(r.max_step_norm_change, 1e-12);
}

TEST(Evolve, AbortsWhenNormCheckFails) {
    const SimulationConfig cfg = support::reduced_config(32, 20);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    EvolveOptions opts;
    opts.abort_threshold = 0.0;
    try {
        evolve_all(basis, field, make_schedule(cfg), opts);
        FAIL() << "expected NumericalAbort";
    } catch (const NumericalAbort &e) {
        EXPECT_TRUE(basis.grid().contains_mode(e.mode()));
    }
}

TEST(Evolve, RejectsMismatchedInputs) {
    const SimulationConfig cfg = support::reduced_config(32, 20);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler wrong(support::reduced_config(64, 20), Grid(2.0, 64));
    EXPECT_THROW(evolve_all(basis, wrong, make_schedule(cfg)), std::invalid_argument);
    const FieldSampler field(cfg, basis.grid());
    EvolutionSchedule s = make_schedule(cfg);
    s.sample_steps.pop_back();
    EXPECT_THROW(evolve_all(basis, field, s), std::invalid_argument);
}

TEST(Evolve, MirrorSymmetricWellGivesMirrorSymmetricU) {
    const SimulationConfig cfg = support::reduced_config(64, 200);
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionResult r = evolve_all(basis, field, make_schedule(cfg));
    const TransitionMatrix &u = r.matrices.back();
    const Grid &g = basis.grid();
    double biggest = 0.0, worst = 0.0;
    for (const complex &z : u.data()) biggest = std::max(biggest, std::abs(z));
    for (long p = -31; p <= 31; ++p)
        for (long n = -31; n <= 31; ++n)
            worst = std::max(worst, std::abs(std::abs(u(g.slot(p), g.slot(n))) - std::abs(u(g.slot(-p), g.slot(-n)))));
    ASSERT_GT(biggest, 0.0);
    EXPECT_LT(worst / biggest, 1e-6);
}

TEST(Evolve, CycleAveragedNumberGrowsDuringOscillation) {
    SimulationConfig cfg = support::reduced_config(256, 1000);
    cfg.sample_stride = 1;
    const FreeBasis basis(build_grid(cfg), c);
    const FieldSampler field(cfg, basis.grid());
    const EvolutionResult r = evolve_all(basis, field, make_schedule(cfg));
    const double period = 2 * std::numbers::pi / cfg.omega;
    std::vector<double> averages;
    for (int m = 0; cfg.ramp_time + (m + 1) * period <= cfg.ramp_time + cfg.oscillation_time; ++m) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t i = 0; i < r.timeseries.times.size(); ++i) {
            const double t = r.timeseries.times[i];
            if (t >= cfg.ramp_time + m * period && t < cfg.ramp_time + (m + 1) * period) {
                sum += r.timeseries.numbers[i];
                ++count;
            }
        }
        averages.push_back(sum / count);
    }
    ASSERT_GE(averages.size(), 20u);
    for (std::size_t m = 1; m < averages.size(); ++m) EXPECT_GT(averages[m], averages[m - 1]) << "period " << m;
}
