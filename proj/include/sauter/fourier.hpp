#pragma once

#include <complex>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <mutex>
#include <new>
#include <stdexcept>
#include <utility>
#include <vector>

#include <fftw3.h>

#include "spinor.hpp"

namespace sauter {

/// Allocator returning 64-byte aligned storage so FFTW plans made on one
/// buffer are valid for every other buffer from this allocator.
template <class T> struct AlignedAllocator {
    using value_type = T;
    static constexpr std::size_t alignment = 64;

    AlignedAllocator() noexcept = default;
    template <class U> AlignedAllocator(const AlignedAllocator<U> &) noexcept {}

    T *allocate(std::size_t n) {
        std::size_t bytes = ((n * sizeof(T) + alignment - 1) / alignment) * alignment;
        void *p = std::aligned_alloc(alignment, bytes == 0 ? alignment : bytes);
        if (p == nullptr) throw std::bad_alloc();
        return static_cast<T *>(p);
    }
    void deallocate(T *p, std::size_t) noexcept { std::free(p); }

    template <class U> bool operator==(const AlignedAllocator<U> &) const noexcept { return true; }
};

using ComplexBuffer = std::vector<complex, AlignedAllocator<complex>>;

namespace detail {
// FFTW's planner is not re-entrant; execution of existing plans is.
inline std::mutex &fftw_planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

enum class FftDirection { forward, backward };

/// Unnormalised in-place FFTW plan over `batch` contiguous transforms of length `n`.
/// Forward uses exp(-2 pi i jk/n), backward exp(+2 pi i jk/n).
class FftPlan {
  public:
    FftPlan(std::size_t n, std::size_t batch, complex *buffer, FftDirection direction) : n_(n), batch_(batch) {
        std::lock_guard lock(detail::fftw_planner_mutex());
        int len = static_cast<int>(n);
        auto *data = reinterpret_cast<fftw_complex *>(buffer);
        plan_ = fftw_plan_many_dft(1, &len, static_cast<int>(batch), data, nullptr, 1, len, data, nullptr, 1, len,
                                   direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
        if (plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }

    FftPlan(const FftPlan &) = delete;
    FftPlan &operator=(const FftPlan &) = delete;
    FftPlan(FftPlan &&other) noexcept : plan_(std::exchange(other.plan_, nullptr)), n_(other.n_), batch_(other.batch_) {}
    FftPlan &operator=(FftPlan &&other) noexcept {
        std::swap(plan_, other.plan_);
        n_ = other.n_;
        batch_ = other.batch_;
        return *this;
    }

    ~FftPlan() {
        if (plan_ != nullptr) {
            std::lock_guard lock(detail::fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
    }

    /// Runs on any AlignedAllocator buffer of at least n * batch elements.
    void execute(complex *data) const {
        auto *p = reinterpret_cast<fftw_complex *>(data);
        fftw_execute_dft(plan_, p, p);
    }

    std::size_t size() const noexcept { return n_; }
    std::size_t batch() const noexcept { return batch_; }

  private:
    fftw_plan plan_ = nullptr;
    std::size_t n_;
    std::size_t batch_;
};

/// Unitary transform psi(z_j) -> psi_k = sqrt(dz/N) sum_j psi_j exp(-i p_k z_j),
/// applied to each spinor component; output in signed mode order.
inline SpinorField to_momentum(const SpinorField &field, const Grid &grid) {
    if (field.representation() != Representation::position)
        throw std::invalid_argument("to_momentum expects a position-representation field");
    if (field.size() != grid.size()) throw std::invalid_argument("field and grid sizes differ");
    const std::size_t n = grid.size();
    ComplexBuffer buf(2 * n);
    FftPlan plan(n, 2, buf.data(), FftDirection::forward);
    for (std::size_t j = 0; j < n; ++j) {
        buf[j] = field[j][0];
        buf[n + j] = field[j][1];
    }
    plan.execute(buf.data());
    const double scale = std::sqrt(grid.dz() / static_cast<double>(n));
    SpinorField out(Representation::momentum, grid);
    for (std::size_t i = 0; i < n; ++i) {
        const long k = grid.mode(i);
        // exp(-i p_k z_0) with z_0 = -L/2 is (-1)^k
        const double sign = (k % 2 == 0) ? scale : -scale;
        const std::size_t m = grid.dft_slot(k);
        out[i] = {sign * buf[m], sign * buf[n + m]};
    }
    return out;
}

/// Inverse of to_momentum.
inline SpinorField to_position(const SpinorField &field, const Grid &grid) {
    if (field.representation() != Representation::momentum)
        throw std::invalid_argument("to_position expects a momentum-representation field");
    if (field.size() != grid.size()) throw std::invalid_argument("field and grid sizes differ");
    const std::size_t n = grid.size();
    ComplexBuffer buf(2 * n);
    FftPlan plan(n, 2, buf.data(), FftDirection::backward);
    const double scale = 1.0 / std::sqrt(grid.dz() * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const long k = grid.mode(i);
        const double sign = (k % 2 == 0) ? scale : -scale;
        const std::size_t m = grid.dft_slot(k);
        buf[m] = sign * field[i][0];
        buf[n + m] = sign * field[i][1];
    }
    plan.execute(buf.data());
    SpinorField out(Representation::position, grid);
    for (std::size_t j = 0; j < n; ++j) out[j] = {buf[j], buf[n + j]};
    return out;
}

} // namespace sauter
