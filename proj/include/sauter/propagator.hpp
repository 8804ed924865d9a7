#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "errors.hpp"
#include "fields.hpp"
#include "fourier.hpp"
#include "free_basis.hpp"
#include "observables.hpp"
#include "transition_matrix.hpp"

namespace sauter {

using Matrix2 = std::array<std::array<complex, 2>, 2>;

/// exp(-i H0(p_k) dt) = cos(E dt) I - i sin(E dt) H0 / E.
inline Matrix2 kinetic_phase(const FreeBasis &basis, long k, double dt) {
    if (dt < 0.0) throw std::invalid_argument("kinetic_phase requires dt >= 0");
    const FreeMode &m = basis.mode(k);
    const double cs = std::cos(m.energy * dt);
    const double sn = std::sin(m.energy * dt);
    const double diag = m.diagonal / m.energy;
    const double off = m.coupling / m.energy;
    const complex mi(0.0, -1.0);
    return {{{cs + mi * sn * diag, mi * sn * off}, {mi * sn * off, cs - mi * sn * diag}}};
}

inline Spinor multiply(const Matrix2 &m, const Spinor &s) {
    return {m[0][0] * s[0] + m[0][1] * s[1], m[1][0] * s[0] + m[1][1] * s[1]};
}

/// One Strang step V/2 K V/2 with the potential sampled at t + dt/2.
template <SeparableField F>
SpinorField split_step(const SpinorField &state, double t, double dt, const F &field, const FreeBasis &basis) {
    if (state.representation() != Representation::position)
        throw std::invalid_argument("split_step expects a position-representation state");
    const Grid &grid = basis.grid();
    const auto shape = std::span<const double>(field.shape());
    const double g = field.amplitude(t + 0.5 * dt);

    SpinorField half(state);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const complex ph = std::polar(1.0, -shape[j] * g * 0.5 * dt);
        half[j] = {ph * half[j][0], ph * half[j][1]};
    }
    SpinorField mom = to_momentum(half, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) mom[i] = multiply(kinetic_phase(basis, grid.mode(i), dt), mom[i]);
    SpinorField out = to_position(mom, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const complex ph = std::polar(1.0, -shape[j] * g * 0.5 * dt);
        out[j] = {ph * out[j][0], ph * out[j][1]};
    }
    return out;
}

/// Applies `steps` split steps starting at time t_start.
template <SeparableField F>
SpinorField propagate(SpinorField state, const F &field, const FreeBasis &basis, double dt, std::size_t steps,
                      double t_start = 0.0) {
    for (std::size_t s = 0; s < steps; ++s)
        state = split_step(state, t_start + static_cast<double>(s) * dt, dt, field, basis);
    return state;
}

/// Time discretisation and the steps at which observables are recorded.
struct EvolutionSchedule {
    double dt = 0.0;
    std::size_t steps = 0;
    /// N(t) recorded here; strictly increasing, starts at 0 and ends at `steps`.
    std::vector<std::size_t> sample_steps;
    /// Steps whose full U_pn block is retained.
    std::vector<std::size_t> matrix_steps;
    /// Steps at which the spatial density is accumulated.
    std::vector<std::size_t> density_steps;

    double time(std::size_t step) const { return static_cast<double>(step) * dt; }
};

/// Samples every `stride` steps plus the final step; matrices and densities at the final step,
/// and densities additionally at each requested time (rounded to the nearest step).
inline EvolutionSchedule make_schedule(const SimulationConfig &config, std::span<const double> density_times = {}) {
    EvolutionSchedule s;
    s.steps = config.time_steps;
    s.dt = config.time_step();
    const std::size_t stride = config.resolved_sample_stride();
    for (std::size_t k = 0; k < s.steps; k += stride) s.sample_steps.push_back(k);
    s.sample_steps.push_back(s.steps);
    s.matrix_steps = {s.steps};
    s.density_steps = {s.steps};
    for (double t : density_times) {
        if (t < 0.0 || t > config.total_time() * (1.0 + 1e-12))
            throw ConfigError("density time " + std::to_string(t) + " outside [0, T]");
        s.density_steps.push_back(std::min<std::size_t>(s.steps, static_cast<std::size_t>(std::llround(t / s.dt))));
    }
    std::sort(s.density_steps.begin(), s.density_steps.end());
    s.density_steps.erase(std::unique(s.density_steps.begin(), s.density_steps.end()), s.density_steps.end());
    return s;
}

struct EvolveOptions {
    /// Worker threads; 0 uses the hardware concurrency.
    unsigned threads = 0;
    /// Record the largest norm change over a single step (costs one extra pass per step).
    bool track_step_norm = false;
    /// Abort when a state's norm drifts further than this from 1.
    double abort_threshold = 1e-6;
};

struct EvolutionResult {
    EvolutionSchedule schedule;
    /// N(t) at each sample step.
    TimeSeriesResult timeseries;
    /// U_pn at each matrix step.
    std::vector<TransitionMatrix> matrices;
    /// Density at each density step.
    std::vector<DensityResult> densities;
    /// max over states and recorded steps of |1 - sum_p |U_pn|^2 - sum_n' |U_n'n|^2|.
    double max_completeness_error = 0.0;
    /// max over states and steps of |norm(step + 1) - norm(step)|, if tracked.
    double max_step_norm_change = 0.0;
};

namespace detail {

inline std::size_t position_in(const std::vector<std::size_t> &sorted, std::size_t step) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), step);
    return (it != sorted.end() && *it == step) ? static_cast<std::size_t>(it - sorted.begin()) : sorted.size();
}

/// Shared read-only data for every worker.
struct EngineTables {
    std::size_t n = 0;
    std::size_t batch = 0;
    double dz = 0.0;
    // exp(-i H0 dt) / N per unshifted DFT slot, written as
    // kinetic_cos * I - i kinetic_diag * sigma_3 - i kinetic_off * sigma_1.
    std::vector<double> kinetic_cos;
    std::vector<double> kinetic_diag;
    std::vector<double> kinetic_off;
    /// (-1)^k per unshifted DFT slot.
    std::vector<double> parity;
    /// Signed slot for each unshifted DFT slot.
    std::vector<std::size_t> signed_slot;
};

/// Evolves one fixed group of columns through every step.
template <SeparableField F> class BatchWorker {
  public:
    BatchWorker(const EngineTables &tables, const FreeBasis &basis, const F &field, const EvolutionSchedule &schedule,
                const EvolveOptions &options)
        : t_(tables), basis_(basis), field_(field), schedule_(schedule), options_(options),
          psi_(2 * tables.batch * tables.n), work_(2 * tables.batch * tables.n), phase_cos_(tables.n),
          phase_sin_(tables.n),
          forward_(tables.n, 2 * tables.batch, psi_.data(), FftDirection::forward),
          backward_(tables.n, 2 * tables.batch, psi_.data(), FftDirection::backward),
          amplitudes_(2 * tables.n), last_norm_(tables.batch, 1.0) {}

    struct Sinks {
        std::vector<std::vector<double>> *column_numbers; // [sample][column]
        std::vector<TransitionMatrix> *matrices;
        std::vector<std::vector<double>> *density_partials; // [density][batch * n]
        double *completeness;
        double *step_change;
    };

    void run(std::size_t batch_index, const Sinks &sinks) {
        const std::size_t n = t_.n;
        const std::size_t first = batch_index * t_.batch;
        const Grid &grid = basis_.grid();

        // Column c starts as v_k exp(i p_k z_j) / sqrt(L).
        const double amp = 1.0 / std::sqrt(grid.length());
        for (std::size_t c = 0; c < t_.batch; ++c) {
            const long k = grid.mode(first + c);
            const RealSpinor &v = basis_.at_slot(first + c).negative;
            const long kk = ((k % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n);
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t turns = (static_cast<std::size_t>(kk) * j) % n;
                const double angle = 2.0 * std::numbers::pi * static_cast<double>(turns) / static_cast<double>(n);
                const complex wave = amp * t_.parity[static_cast<std::size_t>(kk)] * std::polar(1.0, angle);
                psi_[(2 * c) * n + j] = v[0] * wave;
                psi_[(2 * c + 1) * n + j] = v[1] * wave;
            }
            last_norm_[c] = 1.0;
        }
        record(0, first, batch_index, sinks, true);

        // The trailing potential half-step of step s is merged with the leading
        // half-step of step s + 1 unless the state is observed in between.
        double pending = 0.0;
        for (std::size_t s = 0; s < schedule_.steps; ++s) {
            const double dt = schedule_.dt;
            const double g = field_.amplitude(schedule_.time(s) + 0.5 * dt);
            apply_potential((pending + g) * 0.5 * dt);
            apply_kinetic();
            pending = g;
            if (options_.track_step_norm || observed(s + 1)) {
                apply_potential(pending * 0.5 * dt);
                pending = 0.0;
                if (options_.track_step_norm) track_norms(sinks);
                record(s + 1, first, batch_index, sinks, false);
            }
        }
    }

  private:
    bool observed(std::size_t step) const {
        return position_in(schedule_.sample_steps, step) < schedule_.sample_steps.size() ||
               position_in(schedule_.matrix_steps, step) < schedule_.matrix_steps.size() ||
               position_in(schedule_.density_steps, step) < schedule_.density_steps.size();
    }

    /// psi_j *= exp(-i S_j * weight) on every row.
    void apply_potential(double weight) {
        const std::size_t n = t_.n;
        const auto shape = std::span<const double>(field_.shape());
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = -shape[j] * weight;
            phase_cos_[j] = std::cos(angle);
            phase_sin_[j] = std::sin(angle);
        }
        const double *pc = phase_cos_.data();
        const double *ps = phase_sin_.data();
        for (std::size_t r = 0; r < 2 * t_.batch; ++r) {
            double *row = reinterpret_cast<double *>(psi_.data() + r * n);
            for (std::size_t j = 0; j < n; ++j) {
                const double re = row[2 * j];
                const double im = row[2 * j + 1];
                row[2 * j] = re * pc[j] - im * ps[j];
                row[2 * j + 1] = re * ps[j] + im * pc[j];
            }
        }
    }

    /// Forward transform, per-mode exp(-i H0 dt), backward transform.
    void apply_kinetic() {
        const std::size_t n = t_.n;
        forward_.execute(psi_.data());
        const double *kc = t_.kinetic_cos.data();
        const double *kd = t_.kinetic_diag.data();
        const double *ko = t_.kinetic_off.data();
        for (std::size_t c = 0; c < t_.batch; ++c) {
            double *a = reinterpret_cast<double *>(psi_.data() + (2 * c) * n);
            double *b = reinterpret_cast<double *>(psi_.data() + (2 * c + 1) * n);
            for (std::size_t m = 0; m < n; ++m) {
                const double xr = a[2 * m], xi = a[2 * m + 1];
                const double yr = b[2 * m], yi = b[2 * m + 1];
                a[2 * m] = kc[m] * xr + kd[m] * xi + ko[m] * yi;
                a[2 * m + 1] = kc[m] * xi - kd[m] * xr - ko[m] * yr;
                b[2 * m] = kc[m] * yr - kd[m] * yi + ko[m] * xi;
                b[2 * m + 1] = kc[m] * yi + kd[m] * yr - ko[m] * xr;
            }
        }
        backward_.execute(psi_.data());
    }

    double column_norm(std::size_t c) const {
        const std::size_t n = t_.n;
        double sum = 0.0;
        for (std::size_t j = 0; j < 2 * n; ++j) sum += std::norm(psi_[2 * c * n + j]);
        return sum * t_.dz;
    }

    void track_norms(const Sinks &sinks) {
        for (std::size_t c = 0; c < t_.batch; ++c) {
            const double norm = column_norm(c);
            *sinks.step_change = std::max(*sinks.step_change, std::abs(norm - last_norm_[c]));
            last_norm_[c] = norm;
        }
    }

    void record(std::size_t step, std::size_t first, std::size_t batch_index, const Sinks &sinks, bool initial) {
        const std::size_t sample = position_in(schedule_.sample_steps, step);
        const std::size_t matrix = position_in(schedule_.matrix_steps, step);
        const std::size_t density = position_in(schedule_.density_steps, step);
        const bool want_sample = sample < schedule_.sample_steps.size();
        const bool want_matrix = matrix < schedule_.matrix_steps.size();
        const bool want_density = density < schedule_.density_steps.size();
        if (!want_sample && !want_matrix && !want_density) return;

        const std::size_t n = t_.n;
        const Grid &grid = basis_.grid();
        if (!initial) {
            std::copy(psi_.begin(), psi_.end(), work_.begin());
            forward_.execute(work_.data());
        }
        const double scale = std::sqrt(t_.dz / static_cast<double>(n));
        std::vector<double> *partial = want_density ? &(*sinks.density_partials)[density] : nullptr;

        for (std::size_t c = 0; c < t_.batch; ++c) {
            const std::size_t col = first + c;
            // Momentum amplitudes in signed order: [comp0 | comp1].
            if (initial) {
                std::fill(amplitudes_.begin(), amplitudes_.end(), complex{});
                const RealSpinor &v = basis_.at_slot(col).negative;
                amplitudes_[col] = v[0];
                amplitudes_[n + col] = v[1];
            } else {
                for (std::size_t m = 0; m < n; ++m) {
                    const std::size_t i = t_.signed_slot[m];
                    const double f = scale * t_.parity[m];
                    amplitudes_[i] = f * work_[(2 * c) * n + m];
                    amplitudes_[n + i] = f * work_[(2 * c + 1) * n + m];
                }
            }

            double positive = 0.0;
            double negative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const FreeMode &mode = basis_.at_slot(i);
                const Spinor s{amplitudes_[i], amplitudes_[n + i]};
                const complex up = project(mode.positive, s);
                const complex vn = project(mode.negative, s);
                positive += std::norm(up);
                negative += std::norm(vn);
                if (want_matrix) (*sinks.matrices)[matrix](i, col) = up;
                if (want_density) {
                    // keep only the positive-branch part, in unshifted order for the inverse transform
                    amplitudes_[i] = mode.positive[0] * up;
                    amplitudes_[n + i] = mode.positive[1] * up;
                }
            }
            const double norm = positive + negative;
            if (!(std::abs(norm - 1.0) <= options_.abort_threshold))
                throw NumericalAbort("state norm drifted to " + std::to_string(norm) + " at step " +
                                         std::to_string(step) + " for initial mode " +
                                         std::to_string(grid.mode(col)),
                                     grid.mode(col));
            *sinks.completeness = std::max(*sinks.completeness, std::abs(1.0 - norm));
            if (want_sample) (*sinks.column_numbers)[sample][col] = positive;

            if (want_density) {
                const double inv = 1.0 / std::sqrt(t_.dz * static_cast<double>(n));
                complex *a = work_.data() + (2 * c) * n;
                complex *b = work_.data() + (2 * c + 1) * n;
                for (std::size_t m = 0; m < n; ++m) {
                    const std::size_t i = t_.signed_slot[m];
                    const double f = inv * t_.parity[m];
                    a[m] = f * amplitudes_[i];
                    b[m] = f * amplitudes_[n + i];
                }
            }
        }

        if (want_density) {
            backward_.execute(work_.data());
            double *acc = partial->data() + batch_index * n;
            for (std::size_t c = 0; c < t_.batch; ++c) {
                const complex *a = work_.data() + (2 * c) * n;
                const complex *b = work_.data() + (2 * c + 1) * n;
                for (std::size_t j = 0; j < n; ++j) acc[j] += std::norm(a[j]) + std::norm(b[j]);
            }
        }
    }

    const EngineTables &t_;
    const FreeBasis &basis_;
    const F &field_;
    const EvolutionSchedule &schedule_;
    const EvolveOptions &options_;
    ComplexBuffer psi_;
    ComplexBuffer work_;
    std::vector<double> phase_cos_;
    std::vector<double> phase_sin_;
    FftPlan forward_;
    FftPlan backward_;
    std::vector<complex> amplitudes_;
    std::vector<double> last_norm_;
};

} // namespace detail

/// Evolves every negative-energy plane wave through the schedule and records
/// U_pn, N(t) and the electron density.
///
/// Columns are processed in fixed groups of up to eight; every reduction runs
/// in ascending mode order after all workers finish, so the output does not
/// depend on the number of threads.
template <SeparableField F>
EvolutionResult evolve_all(const FreeBasis &basis, const F &field, const EvolutionSchedule &schedule,
                           const EvolveOptions &options = {}) {
    const Grid &grid = basis.grid();
    const std::size_t n = grid.size();
    if (std::span<const double>(field.shape()).size() != n)
        throw std::invalid_argument("field shape does not match the grid");
    if (schedule.sample_steps.empty() || schedule.sample_steps.back() != schedule.steps)
        throw std::invalid_argument("schedule must sample the final step");
    if (!std::is_sorted(schedule.sample_steps.begin(), schedule.sample_steps.end()) ||
        std::adjacent_find(schedule.sample_steps.begin(), schedule.sample_steps.end()) != schedule.sample_steps.end())
        throw std::invalid_argument("sample steps must be strictly increasing");
    for (const auto *list : {&schedule.matrix_steps, &schedule.density_steps})
        if (!std::is_sorted(list->begin(), list->end()) || (!list->empty() && list->back() > schedule.steps))
            throw std::invalid_argument("matrix/density steps must be sorted and within the run");

    detail::EngineTables tables;
    tables.n = n;
    tables.batch = std::min<std::size_t>(8, n);
    tables.dz = grid.dz();
    tables.kinetic_cos.resize(n);
    tables.kinetic_diag.resize(n);
    tables.kinetic_off.resize(n);
    tables.parity.resize(n);
    tables.signed_slot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = grid.mode(i);
        const std::size_t m = grid.dft_slot(k);
        const Matrix2 kin = kinetic_phase(basis, k, schedule.dt);
        const double inv_n = 1.0 / static_cast<double>(n);
        tables.kinetic_cos[m] = 0.5 * (kin[0][0] + kin[1][1]).real() * inv_n;
        tables.kinetic_diag[m] = -0.5 * (kin[0][0] - kin[1][1]).imag() * inv_n;
        tables.kinetic_off[m] = -kin[0][1].imag() * inv_n;
        tables.parity[m] = (k % 2 == 0) ? 1.0 : -1.0;
        tables.signed_slot[m] = i;
    }

    EvolutionResult result;
    result.schedule = schedule;
    std::vector<std::vector<double>> column_numbers(schedule.sample_steps.size(), std::vector<double>(n, 0.0));
    for (std::size_t s : schedule.matrix_steps) result.matrices.emplace_back(n, s, schedule.time(s));
    const std::size_t batches = n / tables.batch;
    std::vector<std::vector<double>> density_partials(schedule.density_steps.size(),
                                                      std::vector<double>(batches * n, 0.0));

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, batches));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex merge;
    double completeness = 0.0;
    double step_change = 0.0;

    auto worker = [&]() {
        double local_completeness = 0.0;
        double local_step = 0.0;
        try {
            detail::BatchWorker<F> w(tables, basis, field, schedule, options);
            typename detail::BatchWorker<F>::Sinks sinks{&column_numbers, &result.matrices, &density_partials,
                                                         &local_completeness, &local_step};
            for (std::size_t b = next++; b < batches && !failed; b = next++) w.run(b, sinks);
        } catch (...) {
            std::lock_guard lock(merge);
            if (!error) error = std::current_exception();
            failed = true;
        }
        std::lock_guard lock(merge);
        completeness = std::max(completeness, local_completeness);
        step_change = std::max(step_change, local_step);
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }
    if (error) std::rethrow_exception(error);

    result.max_completeness_error = completeness;
    result.max_step_norm_change = step_change;
    for (std::size_t s = 0; s < schedule.sample_steps.size(); ++s) {
        double total = 0.0;
        for (std::size_t col = 0; col < n; ++col) total += column_numbers[s][col];
        result.timeseries.times.push_back(schedule.time(schedule.sample_steps[s]));
        result.timeseries.numbers.push_back(total);
    }
    for (std::size_t d = 0; d < schedule.density_steps.size(); ++d) {
        DensityResult rho;
        rho.time = schedule.time(schedule.density_steps[d]);
        rho.positions.resize(n);
        rho.density.assign(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) rho.positions[j] = grid.position(j);
        for (std::size_t b = 0; b < batches; ++b)
            for (std::size_t j = 0; j < n; ++j) rho.density[j] += density_partials[d][b * n + j];
        result.densities.push_back(std::move(rho));
    }
    return result;
}

} // namespace sauter
