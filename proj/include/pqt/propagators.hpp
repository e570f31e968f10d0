#pragma once

#include "pqt/hamiltonian.hpp"

namespace pqt {

/// Strang splitting exp(-iV dt/2h) exp(-iT dt/h) exp(-iV dt/2h) with the
/// kinetic factor applied in momentum space. Exactly norm-preserving,
/// local error O(dt^3).
class SplitOperatorStepper {
  public:
    SplitOperatorStepper(const GridHamiltonian& h, double dt);

    void step(WaveFunction& psi) const;
    double dt() const { return dt_; }
    const GridHamiltonian& hamiltonian() const { return *h_; }

  private:
    const GridHamiltonian* h_;
    double dt_;
    std::vector<cplx> half_potential_phase_;
    std::vector<cplx> kinetic_phase_;
};

/// Crank-Nicolson with a centred finite-difference kinetic term and
/// periodic wrap: solves (1 + iH dt/2h) psi' = (1 - iH dt/2h) psi.
/// 1D solves the cyclic tridiagonal system directly; 2D iterates an
/// alternating-direction factorized solve down to machine residual.
class CrankNicolsonStepper {
  public:
    CrankNicolsonStepper(const GridHamiltonian& h, double dt);

    void step(WaveFunction& psi) const;
    double dt() const { return dt_; }

    /// Finite-difference plane-wave kinetic eigenvalue (for tests).
    static double fd_kinetic_eigenvalue(double k, double dx, double mass, double hbar);

  private:
    std::vector<cplx> apply_fd_hamiltonian(const std::vector<cplx>& v) const;
    /// One factorized (1+iA)(1+iB) solve, the ADI sweep pair.
    std::vector<cplx> adi_solve(const std::vector<cplx>& rhs) const;

    const GridHamiltonian* h_;
    double dt_;
    double lambda_;  // dt / (2 hbar)
};

/// Solves a cyclic tridiagonal system: diag[i] x[i] + sub[i] x[i-1] +
/// sup[i] x[i+1] = rhs[i] with periodic wrap (sub[0] couples to x[n-1]).
std::vector<cplx> solve_cyclic_tridiagonal(const std::vector<cplx>& sub,
                                           const std::vector<cplx>& diag,
                                           const std::vector<cplx>& sup,
                                           const std::vector<cplx>& rhs);

}  // namespace pqt
