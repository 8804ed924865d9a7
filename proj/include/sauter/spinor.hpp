#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "grid.hpp"

namespace sauter {

using complex = std::complex<double>;
using Spinor = std::array<complex, 2>;

enum class Representation { position, momentum };

/// Two-component amplitudes on the grid.
///
/// Position fields hold samples psi(z_j) normalised as sum |psi_j|^2 dz;
/// momentum fields hold signed-order mode amplitudes normalised as sum |psi_k|^2.
class SpinorField {
  public:
    SpinorField(Representation rep, const Grid &grid)
        : rep_(rep), dz_(grid.dz()), values_(grid.size(), Spinor{}) {}

    Representation representation() const noexcept { return rep_; }
    std::size_t size() const noexcept { return values_.size(); }
    double dz() const noexcept { return dz_; }

    Spinor &operator[](std::size_t i) { return values_[i]; }
    const Spinor &operator[](std::size_t i) const { return values_[i]; }

    std::vector<Spinor> &values() noexcept { return values_; }
    const std::vector<Spinor> &values() const noexcept { return values_; }

    double norm_squared() const {
        double sum = 0.0;
        for (const auto &s : values_) sum += std::norm(s[0]) + std::norm(s[1]);
        return rep_ == Representation::position ? sum * dz_ : sum;
    }

  private:
    Representation rep_;
    double dz_;
    std::vector<Spinor> values_;
};

inline complex dot(const Spinor &a, const Spinor &b) { return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]; }

} // namespace sauter
