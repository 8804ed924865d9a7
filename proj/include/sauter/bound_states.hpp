#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "free_basis.hpp"

namespace sauter {

struct WellParameters {
    double c;
    double depth;
    double width;
};

/// cp2 cot(p2 D) - (E V1 / (c p1) - c p1) with p1 = sqrt(c^2 - E^2/c^2) and
/// p2 = sqrt((E + V1)^2/c^2 - c^2).
///
/// Defined for E in (max(-c^2, c^2 - V1), c^2); throws std::domain_error
/// outside it or within 1e-12 of a cotangent pole.
inline double eigen_residual(double energy, const WellParameters &well) {
    const double c = well.c;
    const double c2 = c * c;
    const double p1_sq = c2 - energy * energy / c2;
    const double shifted = energy + well.depth;
    const double p2_sq = shifted * shifted / c2 - c2;
    if (!(p1_sq > 0.0) || !(p2_sq > 0.0) || !(shifted > 0.0))
        throw std::domain_error("energy " + std::to_string(energy) + " outside the bound-state domain");
    const double p1 = std::sqrt(p1_sq);
    const double p2 = std::sqrt(p2_sq);
    const double s = std::sin(p2 * well.width);
    if (std::abs(s) < 1e-12) throw std::domain_error("energy sits on a cotangent pole");
    return c * p2 * std::cos(p2 * well.width) / s - (energy * well.depth / (c * p1) - c * p1);
}

struct BoundStateSet {
    double c = 0.0;
    /// Strictly increasing eigenvalues in atomic units.
    std::vector<double> energies;
    /// |residual| / max(|lhs|, |rhs|) at each root.
    std::vector<double> relative_residuals;
    /// Sign-change brackets that were bisected.
    std::size_t brackets = 0;

    std::vector<double> in_rest_energy_units() const {
        std::vector<double> out;
        for (double e : energies) out.push_back(e / (c * c));
        return out;
    }
};

namespace detail {
inline double relative_residual(double energy, const WellParameters &well) {
    const double c = well.c;
    const double c2 = c * c;
    const double p1 = std::sqrt(c2 - energy * energy / c2);
    const double shifted = energy + well.depth;
    const double p2 = std::sqrt(shifted * shifted / c2 - c2);
    const double lhs = c * p2 / std::tan(p2 * well.width);
    const double rhs = energy * well.depth / (c * p1) - c * p1;
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}
} // namespace detail

/// Roots of eigen_residual over the whole domain.
///
/// The scan is uniform in p2 D with `subdivisions` points per cotangent branch,
/// and every branch is sampled strictly inside its poles, so no bracket ever
/// straddles a pole; sign changes are then genuine roots and are bisected to
/// |dE| < 1e-10 c^2.
inline BoundStateSet solve_bound_states(const WellParameters &well, int subdivisions = 16) {
    if (!(well.depth > 0.0)) throw std::invalid_argument("well depth must be positive");
    if (subdivisions < 2) throw std::invalid_argument("need at least two subdivisions per branch");
    const double c = well.c;
    const double c2 = c * c;
    const double pi = std::numbers::pi;
    const double edge = 1e-12 * c2;
    const double e_lo = std::max(-c2, c2 - well.depth) + edge;
    const double e_hi = c2 - edge;
    if (!(e_lo < e_hi)) throw std::invalid_argument("empty bound-state domain");

    auto phase_of = [&](double e) { return std::sqrt((e + well.depth) * (e + well.depth) / c2 - c2) * well.width; };
    auto energy_of = [&](double phase) {
        const double p2 = phase / well.width;
        return c * std::sqrt(p2 * p2 + c2) - well.depth;
    };

    const double phase_lo = phase_of(e_lo);
    const double phase_hi = phase_of(e_hi);
    BoundStateSet out;
    out.c = c;
    const auto first_branch = static_cast<long>(std::floor(phase_lo / pi));
    const auto last_branch = static_cast<long>(std::floor(phase_hi / pi));
    const double pole_gap = 1e-9 * pi;

    for (long m = first_branch; m <= last_branch; ++m) {
        const bool lo_is_domain = static_cast<double>(m) * pi <= phase_lo;
        const bool hi_is_domain = static_cast<double>(m + 1) * pi >= phase_hi;
        const double a = lo_is_domain ? phase_lo : static_cast<double>(m) * pi + pole_gap;
        const double b = hi_is_domain ? phase_hi : static_cast<double>(m + 1) * pi - pole_gap;
        if (!(a < b)) continue;

        std::vector<double> es;
        for (int k = 0; k <= subdivisions; ++k) {
            double e;
            if (k == 0) e = lo_is_domain ? e_lo : energy_of(a);
            else if (k == subdivisions) e = hi_is_domain ? e_hi : energy_of(b);
            else e = energy_of(a + (b - a) * k / subdivisions);
            es.push_back(std::clamp(e, e_lo, e_hi));
        }
        double prev = eigen_residual(es[0], well);
        for (std::size_t k = 1; k < es.size(); ++k) {
            const double cur = eigen_residual(es[k], well);
            if ((prev < 0.0) != (cur < 0.0)) {
                ++out.brackets;
                double lo = es[k - 1];
                double hi = es[k];
                double f_lo = prev;
                while (hi - lo > 1e-10 * c2) {
                    const double mid = 0.5 * (lo + hi);
                    const double f_mid = eigen_residual(mid, well);
                    if ((f_mid < 0.0) == (f_lo < 0.0)) {
                        lo = mid;
                        f_lo = f_mid;
                    } else {
                        hi = mid;
                    }
                }
                const double root = 0.5 * (lo + hi);
                out.energies.push_back(root);
                out.relative_residuals.push_back(detail::relative_residual(root, well));
            }
            prev = cur;
        }
    }
    if (out.energies.empty()) throw std::runtime_error("no bound states found for the given well");
    std::sort(out.energies.begin(), out.energies.end());
    return out;
}

/// Continuous mode index N_p = L sqrt(E^2/c^2 - c^2) / (2 pi) of a free electron with energy E.
inline double energy_to_mode(double energy, double c, double box_length) {
    const double c2 = c * c;
    if (energy < c2) throw std::domain_error("energy below the rest energy has no free mode");
    return box_length * std::sqrt(std::max(0.0, energy * energy / c2 - c2)) / (2.0 * std::numbers::pi);
}

/// Energy of a free electron in mode N_p on a box of length L.
inline double mode_energy(double mode, double c, double box_length) {
    return free_energy(2.0 * std::numbers::pi * mode / box_length, c);
}

} // namespace sauter
