#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include "config.hpp"

namespace sauter {

/// Conjugate position/momentum grids on a periodic box [-L/2, L/2).
///
/// Momentum-space quantities are stored in signed order: storage slot i
/// holds mode k = i - N/2, so slot 0 is k = -N/2 and slot N/2 is k = 0.
class Grid {
  public:
    Grid(double length, std::size_t points) : length_(length), points_(points) {
        if (!(length > 0.0)) throw std::invalid_argument("grid length must be positive");
        if (points < 2 || (points & (points - 1)) != 0)
            throw std::invalid_argument("grid size must be a power of two, got " + std::to_string(points));
    }

    std::size_t size() const noexcept { return points_; }
    double length() const noexcept { return length_; }
    double dz() const noexcept { return length_ / static_cast<double>(points_); }
    double dp() const noexcept { return 2.0 * std::numbers::pi / length_; }

    double position(std::size_t j) const noexcept { return -0.5 * length_ + static_cast<double>(j) * dz(); }

    long min_mode() const noexcept { return -static_cast<long>(points_ / 2); }
    long max_mode() const noexcept { return static_cast<long>(points_ / 2) - 1; }
    bool contains_mode(long k) const noexcept { return k >= min_mode() && k <= max_mode(); }

    /// Signed mode index N_p stored in slot i.
    long mode(std::size_t slot) const noexcept { return static_cast<long>(slot) + min_mode(); }
    std::size_t slot(long k) const noexcept { return static_cast<std::size_t>(k - min_mode()); }

    /// Slot of mode k in the unshifted DFT output order (k mod N).
    std::size_t dft_slot(long k) const noexcept {
        const long n = static_cast<long>(points_);
        return static_cast<std::size_t>(((k % n) + n) % n);
    }

    double momentum(long k) const noexcept { return 2.0 * std::numbers::pi * static_cast<double>(k) / length_; }

  private:
    double length_;
    std::size_t points_;
};

inline Grid build_grid(const SimulationConfig &config) { return Grid(config.box_length, config.grid_points); }

} // namespace sauter
