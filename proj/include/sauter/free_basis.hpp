#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "spinor.hpp"

namespace sauter {

/// Field-free Dirac energy sqrt(c^2 p^2 + c^4).
inline double free_energy(double p, double c) { return std::sqrt(c * c * p * p + c * c * c * c); }

using RealSpinor = std::array<double, 2>;

/// The mode's free Hamiltonian is [[diagonal, coupling], [coupling, -diagonal]]
/// with eigenvalues +-energy. Ordinary modes have diagonal = c^2, coupling = cp.
/// The Nyquist mode k = -Nz/2 is its own mirror image, so it carries no odd
/// coupling: diagonal = E(p), coupling = 0. This keeps the discrete propagator
/// exactly invariant under z -> -z with sigma_3.
struct FreeMode {
    long index;
    double momentum;
    double energy;
    double diagonal;
    double coupling;
    /// Eigenvector with eigenvalue +energy.
    RealSpinor positive;
    /// Eigenvector with eigenvalue -energy.
    RealSpinor negative;
};

enum class Branch { positive, negative };

/// Per-mode free eigensystem in signed mode order.
class FreeBasis {
  public:
    FreeBasis(const Grid &grid, double c) : grid_(grid), c_(c) {
        modes_.reserve(grid.size());
        const double c2 = c * c;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const long k = grid.mode(i);
            const double p = grid.momentum(k);
            const double e = free_energy(p, c);
            FreeMode m{k, p, e, c2, c * p, {1.0, 0.0}, {0.0, 1.0}};
            if (k == grid.min_mode()) {
                m.diagonal = e;
                m.coupling = 0.0;
            } else if (k != 0) {
                const double ratio = c * p / (e + c2);
                const double norm = 1.0 / std::sqrt(1.0 + ratio * ratio);
                m.positive = {norm, ratio * norm};
                m.negative = {-ratio * norm, norm};
            }
            modes_.push_back(m);
        }
    }

    const Grid &grid() const noexcept { return grid_; }
    double c() const noexcept { return c_; }
    std::size_t size() const noexcept { return modes_.size(); }

    const FreeMode &at_slot(std::size_t slot) const { return modes_[slot]; }
    const FreeMode &mode(long k) const {
        if (!grid_.contains_mode(k)) throw std::out_of_range("mode " + std::to_string(k) + " outside grid");
        return modes_[grid_.slot(k)];
    }

    const std::vector<FreeMode> &modes() const noexcept { return modes_; }

  private:
    Grid grid_;
    double c_;
    std::vector<FreeMode> modes_;
};

inline FreeBasis build_free_basis(const Grid &grid, double c) { return FreeBasis(grid, c); }

inline complex project(const RealSpinor &u, const Spinor &psi) { return u[0] * psi[0] + u[1] * psi[1]; }

/// Unit-norm momentum-representation state occupying mode k on the chosen branch.
inline SpinorField plane_wave_state(const FreeBasis &basis, long k, Branch branch) {
    const FreeMode &m = basis.mode(k);
    SpinorField field(Representation::momentum, basis.grid());
    const RealSpinor &s = branch == Branch::positive ? m.positive : m.negative;
    field[basis.grid().slot(k)] = {complex(s[0]), complex(s[1])};
    return field;
}

} // namespace sauter
