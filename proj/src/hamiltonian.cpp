#include "pqt/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

#include "pqt/fourier.hpp"

namespace pqt {

void ParticleSet::validate() const {
    if (!(m_a > 0.0 && m_b > 0.0 && m_c > 0.0))
        throw std::invalid_argument("particles: all masses must be positive");
}

GridHamiltonian::GridHamiltonian(const HamiltonianSpec& spec, const Grid& grid)
    : grid_(grid), hbar_(spec.hbar), variant_(spec.variant) {
    spec.particles.validate();
    if (grid.dims() != 2)
        throw std::invalid_argument(
            "hamiltonian: the three-body Jacobi system needs a 2D (R,r) grid");
    masses_ = {spec.particles.mu_R(), spec.particles.mu_r()};
    build_kinetic();

    potential_.assign(grid.size(), 0.0);
    if (spec.variant == HamiltonianVariant::FreeChannelA) return;

    const Axis& aR = grid.axis(0);
    const Axis& ar = grid.axis(1);
    double beta = spec.particles.m_c / (spec.particles.m_b + spec.particles.m_c);
    double gamma = spec.particles.m_b / (spec.particles.m_b + spec.particles.m_c);
    bool full = spec.variant == HamiltonianVariant::Full;
    for (int i = 0; i < aR.n; ++i) {
        double R = aR.x(i);
        for (int j = 0; j < ar.n; ++j) {
            double r = ar.x(j);
            double v = spec.potentials.v_bc(r);
            if (full) {
                v += spec.potentials.v_ab(R + beta * r);
                v += spec.potentials.v_ac(R - gamma * r);
            }
            potential_[static_cast<std::size_t>(i) * ar.n + j] = v;
        }
    }
}

GridHamiltonian GridHamiltonian::pair_hamiltonian(const ParticleSet& particles,
                                                  const PotentialTerm& v_bc,
                                                  const Grid& grid, double hbar) {
    particles.validate();
    if (grid.dims() != 1)
        throw std::invalid_argument("pair_hamiltonian: expects the 1D r axis");
    GridHamiltonian h(grid, hbar);
    h.masses_ = {particles.mu_r()};
    h.build_kinetic();
    h.potential_.resize(grid.size());
    for (int j = 0; j < grid.axis(0).n; ++j)
        h.potential_[j] = v_bc(grid.axis(0).x(j));
    return h;
}

GridHamiltonian GridHamiltonian::single_particle(double mass,
                                                 std::vector<double> potential,
                                                 const Grid& grid, double hbar) {
    if (grid.dims() != 1)
        throw std::invalid_argument("single_particle: expects a 1D grid");
    if (potential.size() != grid.size())
        throw std::invalid_argument("single_particle: potential shape mismatch");
    GridHamiltonian h(grid, hbar);
    h.masses_ = {mass};
    h.build_kinetic();
    h.potential_ = std::move(potential);
    return h;
}

void GridHamiltonian::build_kinetic() {
    kinetic_.assign(grid_.size(), 0.0);
    if (grid_.dims() == 1) {
        const Axis& ax = grid_.axis(0);
        for (int j = 0; j < ax.n; ++j) {
            double k = ax.k(j);
            kinetic_[j] = hbar_ * hbar_ * k * k / (2.0 * masses_[0]);
        }
        return;
    }
    const Axis& a0 = grid_.axis(0);
    const Axis& a1 = grid_.axis(1);
    for (int i = 0; i < a0.n; ++i) {
        double k0 = a0.k(i);
        double t0 = hbar_ * hbar_ * k0 * k0 / (2.0 * masses_[0]);
        for (int j = 0; j < a1.n; ++j) {
            double k1 = a1.k(j);
            kinetic_[static_cast<std::size_t>(i) * a1.n + j] =
                t0 + hbar_ * hbar_ * k1 * k1 / (2.0 * masses_[1]);
        }
    }
}

WaveFunction GridHamiltonian::apply(const WaveFunction& psi) const {
    if (psi.grid() != grid_)
        throw std::invalid_argument("apply_hamiltonian: grid mismatch");
    // Kinetic part via momentum-space multiplication.
    WaveFunction khat = momentum_transform(psi, FourierDirection::Forward);
    for (std::size_t i = 0; i < khat.size(); ++i) khat[i] *= kinetic_[i];
    WaveFunction out = momentum_transform(khat, FourierDirection::Inverse);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += potential_[i] * psi[i];
    return out;
}

double GridHamiltonian::energy_expectation(const WaveFunction& psi) const {
    require_normalized(psi);
    return inner_product(psi, apply(psi)).real();
}

}  // namespace pqt
