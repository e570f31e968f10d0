#pragma once

#include <optional>

#include "pqt/bound_projector.hpp"

namespace pqt {

/// Channel split Phi = c_A phi_A + c_B phi_B at one instant. Phase
/// convention: c_X real and nonnegative, phases absorbed into phi_X.
/// A channel whose mass falls below p_min is marked absent instead of
/// being normalized from numerical noise.
struct ChannelDecomposition {
    double c_a = 0.0;
    double c_b = 0.0;
    std::optional<WaveFunction> phi_a;
    std::optional<WaveFunction> phi_b;
    double t = 0.0;
};

ChannelDecomposition decompose(const WaveFunction& big_phi, const BoundProjector& p_b,
                               double p_min = 1e-12, double t = 0.0);

}  // namespace pqt
