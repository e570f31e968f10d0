#pragma once

#include "pqt/wavefunction.hpp"

namespace pqt {

/// Orthogonal projector onto states whose pair coordinate (axis 1, "r")
/// lies along the bound-state wavefunction phi_bc:
///   (P_B Phi)(R,r) = phi_bc(r) * Integral conj(phi_bc(r')) Phi(R,r') dr'.
class BoundProjector {
  public:
    explicit BoundProjector(WaveFunction phi_bc);

    const WaveFunction& phi_bc() const { return phi_bc_; }

    /// Complex bound-channel profile chi(R) = <phi_bc|Phi>_r.
    std::vector<cplx> chi(const WaveFunction& big_phi) const;

    WaveFunction apply(const WaveFunction& big_phi) const;

    /// phi_bc(r) * chi(R) on the 2D grid of `like`.
    WaveFunction embed(const std::vector<cplx>& chi, const WaveFunction& like) const;

  private:
    void check_grid(const WaveFunction& big_phi) const;
    WaveFunction phi_bc_;
};

}  // namespace pqt
