#pragma once

#include "pqt/potentials.hpp"
#include "pqt/wavefunction.hpp"

namespace pqt {

struct ParticleSet {
    double m_a = 1.0;
    double m_b = 1.0;
    double m_c = 1.0;

    void validate() const;
    /// Reduced mass of the projectile against the pair centre.
    double mu_R() const { return m_a * (m_b + m_c) / (m_a + m_b + m_c); }
    /// Reduced mass of the bound pair.
    double mu_r() const { return m_b * m_c / (m_b + m_c); }
};

enum class HamiltonianVariant { Full, FreeChannelA, BoundChannelB };

/// Declarative Hamiltonian in Jacobi coordinates (axis 0 = R, axis 1 = r):
///   Full          T_R + T_r + V_bc(r) + V_ab(x_a-x_b) + V_ac(x_a-x_c)
///   FreeChannelA  T_R + T_r
///   BoundChannelB T_R + T_r + V_bc(r)
/// with x_a-x_b = R + (m_c/(m_b+m_c)) r and x_a-x_c = R - (m_b/(m_b+m_c)) r.
struct HamiltonianSpec {
    ParticleSet particles;
    PotentialSet potentials;
    HamiltonianVariant variant = HamiltonianVariant::Full;
    double hbar = 1.0;
};

/// A HamiltonianSpec realized on a grid: kinetic curve per momentum bin
/// plus the pointwise potential field. Immutable after construction.
class GridHamiltonian {
  public:
    GridHamiltonian(const HamiltonianSpec& spec, const Grid& grid);

    /// Pair Hamiltonian on the 1D r axis: T_r + V_bc. Used by the
    /// bound-state solver.
    static GridHamiltonian pair_hamiltonian(const ParticleSet& particles,
                                            const PotentialTerm& v_bc,
                                            const Grid& grid, double hbar = 1.0);

    /// Custom single-particle Hamiltonian on a 1D grid (mass + potential field).
    static GridHamiltonian single_particle(double mass, std::vector<double> potential,
                                           const Grid& grid, double hbar = 1.0);

    const Grid& grid() const { return grid_; }
    double hbar() const { return hbar_; }
    HamiltonianVariant variant() const { return variant_; }
    const std::vector<double>& potential() const { return potential_; }
    /// Kinetic eigenvalue of momentum bin (flattened index).
    const std::vector<double>& kinetic() const { return kinetic_; }
    double mass(int axis) const { return masses_.at(axis); }

    WaveFunction apply(const WaveFunction& psi) const;
    double energy_expectation(const WaveFunction& psi) const;

  private:
    GridHamiltonian(const Grid& grid, double hbar) : grid_(grid), hbar_(hbar) {}
    void build_kinetic();

    Grid grid_;
    double hbar_;
    HamiltonianVariant variant_ = HamiltonianVariant::BoundChannelB;
    std::vector<double> masses_;     // per axis
    std::vector<double> potential_;  // position space, flattened
    std::vector<double> kinetic_;    // momentum space, flattened
};

}  // namespace pqt
