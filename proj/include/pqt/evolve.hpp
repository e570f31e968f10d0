#pragma once

#include <functional>

#include "pqt/propagators.hpp"

namespace pqt {

enum class Scheme { SplitOperator, CrankNicolson };

struct EvolveOptions {
    Scheme scheme = Scheme::SplitOperator;
    double dt = 1e-3;
    int observer_stride = 1;
    /// Boundary-mass guard; stride 0 disables the check.
    double guard_tol = 1e-6;
    double guard_fraction = 0.05;
    int guard_stride = 0;
};

/// Called after every observer_stride steps (and once at step 0) with
/// (step index, time, state).
using Observer = std::function<void(long step, double t, const WaveFunction&)>;

/// Repeated stepping from t0 to t1. (t1-t0)/dt must be integral within
/// 1e-9. Deterministic given inputs.
WaveFunction evolve(WaveFunction psi, const GridHamiltonian& h, double t0, double t1,
                    const EvolveOptions& opts, const std::vector<Observer>& observers = {});

}  // namespace pqt
