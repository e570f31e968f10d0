#pragma once

#include <optional>

#include "pqt/hamiltonian.hpp"

namespace pqt {

/// Ground (or deflated excited) state of a 1D pair Hamiltonian.
struct BoundState {
    double energy = 0.0;
    WaveFunction phi;
};

struct ImaginaryTimeOptions {
    /// Imaginary-time step schedule, annealed from coarse to fine; each
    /// stage runs until the Rayleigh-quotient energy changes by less
    /// than rel_tol between sweeps.
    std::vector<double> tau_schedule = {0.1, 0.02, 0.002, 5e-4};
    double rel_tol = 1e-12;
    long max_sweeps_per_stage = 200000;
    /// State to project out each sweep (Gram-Schmidt deflation).
    std::optional<WaveFunction> deflate;
    /// Require E0 < 0 (a genuine bound state); on failure throws
    /// "channel B undefined for this potential".
    bool require_bound = true;
    double residual_tol = 1e-6;
};

BoundState ground_state_imaginary_time(const GridHamiltonian& h,
                                       const ImaginaryTimeOptions& opts = {});

}  // namespace pqt
