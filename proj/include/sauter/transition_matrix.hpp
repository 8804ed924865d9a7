#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "spinor.hpp"

namespace sauter {

/// Amplitudes U_pn from negative-energy mode n to positive-energy mode p at one time.
/// Rows and columns are signed-order slots; storage is row-major over p then n.
class TransitionMatrix {
  public:
    TransitionMatrix() = default;
    TransitionMatrix(std::size_t modes, std::size_t step, double time)
        : modes_(modes), step_(step), time_(time), data_(modes * modes) {}

    std::size_t modes() const noexcept { return modes_; }
    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return time_; }

    complex &operator()(std::size_t p, std::size_t n) { return data_[p * modes_ + n]; }
    const complex &operator()(std::size_t p, std::size_t n) const { return data_[p * modes_ + n]; }

    std::vector<complex> &data() noexcept { return data_; }
    const std::vector<complex> &data() const noexcept { return data_; }

  private:
    std::size_t modes_ = 0;
    std::size_t step_ = 0;
    double time_ = 0.0;
    std::vector<complex> data_;
};

} // namespace sauter
