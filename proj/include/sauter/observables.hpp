#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fourier.hpp"
#include "free_basis.hpp"
#include "transition_matrix.hpp"

namespace sauter {

/// Created-electron occupation per signed mode N_p.
struct SpectrumResult {
    double time = 0.0;
    std::vector<long> modes;
    std::vector<double> occupation;

    double total() const {
        double sum = 0.0;
        for (double v : occupation) sum += v;
        return sum;
    }
    double positive_side() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (modes[i] > 0) sum += occupation[i];
        return sum;
    }
    double negative_side() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i)
            if (modes[i] < 0) sum += occupation[i];
        return sum;
    }
    /// Occupation at mode k, or 0 if k is not on the grid.
    double at(long k) const {
        if (modes.empty() || k < modes.front() || k > modes.back()) return 0.0;
        return occupation[static_cast<std::size_t>(k - modes.front())];
    }
};

struct TimeSeriesResult {
    std::vector<double> times;
    std::vector<double> numbers;
};

struct DensityResult {
    double time = 0.0;
    std::vector<double> positions;
    std::vector<double> density;

    /// Rectangle rule on the periodic grid (exact for trigonometric polynomials).
    double integral() const {
        if (positions.size() < 2) return 0.0;
        const double dz = positions[1] - positions[0];
        double sum = 0.0;
        for (double v : density) sum += v;
        return sum * dz;
    }
};

inline SpectrumResult momentum_spectrum(const TransitionMatrix &u) {
    const std::size_t n = u.modes();
    SpectrumResult out;
    out.time = u.time();
    out.modes.resize(n);
    out.occupation.assign(n, 0.0);
    const long first = -static_cast<long>(n / 2);
    for (std::size_t p = 0; p < n; ++p) {
        out.modes[p] = first + static_cast<long>(p);
        double sum = 0.0;
        for (std::size_t col = 0; col < n; ++col) sum += std::norm(u(p, col));
        out.occupation[p] = sum;
    }
    return out;
}

/// Sum over p of the spectrum rows, so it equals momentum_spectrum(u).total() bit for bit.
inline double total_number(const TransitionMatrix &u) { return momentum_spectrum(u).total(); }

/// Electron density from evolved momentum-representation states: each state is
/// projected on the positive-energy branch, transformed to position space and
/// its squared modulus accumulated in input order.
inline DensityResult spatial_density(std::span<const SpinorField> states, const FreeBasis &basis, double time = 0.0) {
    const Grid &grid = basis.grid();
    DensityResult out;
    out.time = time;
    out.positions.resize(grid.size());
    out.density.assign(grid.size(), 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) out.positions[j] = grid.position(j);

    for (const SpinorField &state : states) {
        if (state.representation() != Representation::momentum)
            throw std::invalid_argument("spatial_density expects momentum-representation states");
        if (state.size() != grid.size()) throw std::invalid_argument("state does not match the basis grid");
        SpinorField projected(Representation::momentum, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const RealSpinor &u = basis.at_slot(i).positive;
            const complex amp = project(u, state[i]);
            projected[i] = {u[0] * amp, u[1] * amp};
        }
        const SpinorField phi = to_position(projected, grid);
        for (std::size_t j = 0; j < grid.size(); ++j) out.density[j] += std::norm(phi[j][0]) + std::norm(phi[j][1]);
    }
    return out;
}

} // namespace sauter
