#pragma once

#include "pqt/hamiltonian.hpp"

namespace pqt {

/// Brute-force propagator: builds the dense Hamiltonian matrix (DFT
/// kinetic conjugated into the position basis plus diagonal potential)
/// and applies exp(-iHt/hbar) through a full eigendecomposition.
/// Ground truth for the fast steppers; total dimension capped at 4096.
WaveFunction dense_oracle_evolve(const WaveFunction& psi0, const GridHamiltonian& h,
                                 double t);

}  // namespace pqt
