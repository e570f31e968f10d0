#pragma once

#include "pqt/wavefunction.hpp"

namespace pqt {

/// Normalized Gaussian wave packet on a 1D grid:
///   psi(x) ~ exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar).
/// Requires sigma > 2*dx and tail mass outside the box below 1e-8.
WaveFunction gaussian_packet(const Grid& grid, double x0, double p0, double sigma,
                             double hbar = 1.0, const std::string& label = "x");

/// Product state f(axis0) * g(axis1) on the implied 2D grid.
WaveFunction product_state(const WaveFunction& f, const WaveFunction& g);

}  // namespace pqt
