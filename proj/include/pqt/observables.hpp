#pragma once

#include <optional>

#include "pqt/wavefunction.hpp"

namespace pqt {

/// |psi|^2, optionally marginalized onto one axis of a 2D state.
/// The result integrates to 1 under the remaining dx weights.
std::vector<double> position_density(const WaveFunction& psi,
                                     std::optional<int> marginal_axis = std::nullopt);

double position_expectation(const WaveFunction& psi, int axis = 0);
double position_variance(const WaveFunction& psi, int axis = 0);
double momentum_expectation(const WaveFunction& psi, int axis = 0, double hbar = 1.0);

/// Probability mass in the outer `fraction` of the box on any axis.
double boundary_mass(const WaveFunction& psi, double fraction = 0.05);

/// Raises a diagnostic error when the boundary mass exceeds `tol`.
void check_boundary_guard(const WaveFunction& psi, double tol = 1e-6,
                          double fraction = 0.05, double time_stamp = 0.0);

}  // namespace pqt
