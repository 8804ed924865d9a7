#pragma once

#include <cstddef>
#include <random>

#include "sauter/config.hpp"
#include "sauter/grid.hpp"
#include "sauter/spinor.hpp"

namespace sauter::support {

// Default physics at a reduced grid; everything else stays as configured.
inline SimulationConfig reduced_config(std::size_t nz, std::size_t nt) {
    SimulationConfig cfg;
    cfg.grid_points = nz;
    cfg.time_steps = nt;
    return cfg;
}

inline SimulationConfig field_free_config(std::size_t nz, std::size_t nt) {
    SimulationConfig cfg = reduced_config(nz, nt);
    cfg.static_amplitude = 0.0;
    cfg.oscillating_amplitude = 0.0;
    return cfg;
}

inline SpinorField random_field(Representation rep, const Grid &grid, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SpinorField f(rep, grid);
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = {complex(gauss(rng), gauss(rng)), complex(gauss(rng), gauss(rng))};
    return f;
}

} // namespace sauter::support
