#pragma once

#include <optional>
#include <vector>

#include "pqt/random_stream.hpp"
#include "pqt/wavefunction.hpp"

namespace pqt {

/// A 1D packet crossing a row of detector cells. Each cell dissociates
/// with probability eta * (packet mass inside the cell); the whole bank
/// resolves in one categorical event after the packet has passed, so at
/// most one site fires per run.
struct PlateConfig {
    WaveFunction psi;              // normalized 1D state over the plate
    struct Cell {
        double lo = 0.0, hi = 0.0;
    };
    std::vector<Cell> cells;       // disjoint, ascending
    double eta = 1.0;              // coupling efficiency in (0,1]

    void validate() const;
};

/// Site probabilities p_i = eta * integral_cell |psi|^2 dx (grid cells
/// attributed by center), plus p_none = 1 - sum p_i.
std::vector<double> plate_probabilities(const PlateConfig& cfg);

struct PlateOutcome {
    std::optional<std::size_t> site;  // nullopt: no dissociation
};

PlateOutcome run_plate(const PlateConfig& cfg, RandomStream& stream);

}  // namespace pqt
