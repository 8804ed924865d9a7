#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fields.hpp"
#include "free_basis.hpp"
#include "propagator.hpp"
#include "transition_matrix.hpp"

namespace sauter {

struct DenseOracleResult {
    /// U_pn at each of the schedule's matrix steps.
    std::vector<TransitionMatrix> matrices;
    /// max entry of |P^dagger P - I| for the full 2N x 2N evolution operator P.
    double unitarity_error = 0.0;
};

inline constexpr std::size_t kDenseOracleMaxModes = 64;

/// Builds the full discretised Hamiltonian (kinetic block conjugated by an
/// explicit DFT matrix, potential diagonal in position), evolves it with one
/// exact matrix exponential per step at the step midpoint, and extracts the
/// same U_pn block as evolve_all.
template <SeparableField F>
DenseOracleResult dense_oracle(const FreeBasis &basis, const F &field, const EvolutionSchedule &schedule) {
    using Mat = Eigen::MatrixXcd;
    const Grid &grid = basis.grid();
    const std::size_t n = grid.size();
    if (n > kDenseOracleMaxModes) throw std::invalid_argument("dense oracle is limited to 64 grid points");
    const auto dim = static_cast<Eigen::Index>(2 * n);
    const auto ni = static_cast<Eigen::Index>(n);

    // Unitary DFT: row = signed slot, column = grid point.
    Mat dft(ni, ni);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            dft(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::polar(1.0 / std::sqrt(static_cast<double>(n)), -grid.momentum(grid.mode(i)) * grid.position(j));

    Mat kinetic = Mat::Zero(dim, dim);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Eigen::VectorXcd h0(ni);
            for (std::size_t i = 0; i < n; ++i) {
                const FreeMode &m = basis.at_slot(i);
                const double entry = (a == b) ? (a == 0 ? m.diagonal : -m.diagonal) : m.coupling;
                h0(static_cast<Eigen::Index>(i)) = entry;
            }
            kinetic.block(a * ni, b * ni, ni, ni) = dft.adjoint() * h0.asDiagonal() * dft;
        }
    }
    const Mat hermitian_kinetic = 0.5 * (kinetic + kinetic.adjoint());
    const auto shape = std::span<const double>(field.shape());

    auto step_operator = [&](double g) {
        Mat h = hermitian_kinetic;
        for (std::size_t j = 0; j < n; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            h(jj, jj) += shape[j] * g;
            h(ni + jj, ni + jj) += shape[j] * g;
        }
        Eigen::SelfAdjointEigenSolver<Mat> eig(h);
        Eigen::VectorXcd phases(dim);
        for (Eigen::Index k = 0; k < dim; ++k) phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * schedule.dt);
        return Mat(eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint());
    };

    // Initial columns: v_n on mode n.
    Mat initial = Mat::Zero(dim, ni);
    for (std::size_t col = 0; col < n; ++col) {
        const RealSpinor &v = basis.at_slot(col).negative;
        for (std::size_t j = 0; j < n; ++j) {
            const complex w = std::conj(dft(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(j)));
            initial(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(col)) = v[0] * w;
            initial(ni + static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(col)) = v[1] * w;
        }
    }

    DenseOracleResult result;
    auto extract = [&](const Mat &states, std::size_t step) {
        TransitionMatrix u(n, step, schedule.time(step));
        const Mat upper = dft * states.topRows(ni);
        const Mat lower = dft * states.bottomRows(ni);
        for (std::size_t p = 0; p < n; ++p) {
            const RealSpinor &up = basis.at_slot(p).positive;
            for (std::size_t col = 0; col < n; ++col) {
                const auto pi = static_cast<Eigen::Index>(p);
                const auto ci = static_cast<Eigen::Index>(col);
                u(p, col) = up[0] * upper(pi, ci) + up[1] * lower(pi, ci);
            }
        }
        result.matrices.push_back(std::move(u));
    };

    Mat evolution = Mat::Identity(dim, dim);
    Mat cached;
    double cached_g = std::numeric_limits<double>::quiet_NaN();
    std::size_t next_matrix = 0;
    auto maybe_extract = [&](std::size_t step) {
        while (next_matrix < schedule.matrix_steps.size() && schedule.matrix_steps[next_matrix] == step) {
            extract(evolution * initial, step);
            ++next_matrix;
        }
    };
    maybe_extract(0);
    for (std::size_t s = 0; s < schedule.steps; ++s) {
        const double g = field.amplitude(schedule.time(s) + 0.5 * schedule.dt);
        if (!(g == cached_g)) {
            cached = step_operator(g);
            cached_g = g;
        }
        evolution = cached * evolution;
        maybe_extract(s + 1);
    }
    result.unitarity_error = (evolution.adjoint() * evolution - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff();
    return result;
}

} // namespace sauter
