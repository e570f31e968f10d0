#include "pqt/propagators.hpp"

#include <cmath>
#include <stdexcept>

#include "pqt/fourier.hpp"

namespace pqt {

namespace {
cplx phase_factor(double angle) { return {std::cos(angle), std::sin(angle)}; }
}  // namespace

SplitOperatorStepper::SplitOperatorStepper(const GridHamiltonian& h, double dt)
    : h_(&h), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("split_operator: dt must be positive");
    half_potential_phase_.resize(h.grid().size());
    kinetic_phase_.resize(h.grid().size());
    for (std::size_t i = 0; i < h.grid().size(); ++i) {
        half_potential_phase_[i] = phase_factor(-h.potential()[i] * dt / (2.0 * h.hbar()));
        kinetic_phase_[i] = phase_factor(-h.kinetic()[i] * dt / h.hbar());
    }
}

void SplitOperatorStepper::step(WaveFunction& psi) const {
    if (psi.grid() != h_->grid())
        throw std::invalid_argument("split_operator: grid mismatch");
    auto& a = psi.amp();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= half_potential_phase_[i];
    fft_inplace(a, psi.grid(), FourierDirection::Forward);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= kinetic_phase_[i];
    fft_inplace(a, psi.grid(), FourierDirection::Inverse);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= half_potential_phase_[i];
}

CrankNicolsonStepper::CrankNicolsonStepper(const GridHamiltonian& h, double dt)
    : h_(&h), dt_(dt), lambda_(dt / (2.0 * h.hbar())) {
    if (!(dt > 0.0)) throw std::invalid_argument("crank_nicolson: dt must be positive");
}

double CrankNicolsonStepper::fd_kinetic_eigenvalue(double k, double dx, double mass,
                                                   double hbar) {
    return hbar * hbar * (1.0 - std::cos(k * dx)) / (mass * dx * dx);
}

std::vector<cplx> solve_cyclic_tridiagonal(const std::vector<cplx>& sub,
                                           const std::vector<cplx>& diag,
                                           const std::vector<cplx>& sup,
                                           const std::vector<cplx>& rhs) {
    const std::size_t n = diag.size();
    auto thomas = [&](const std::vector<cplx>& b, const std::vector<cplx>& d) {
        std::vector<cplx> c(n), x(n);
        cplx beta = b[0];
        x[0] = d[0] / beta;
        for (std::size_t i = 1; i < n; ++i) {
            c[i] = sup[i - 1] / beta;
            beta = b[i] - sub[i] * c[i];
            x[i] = (d[i] - sub[i] * x[i - 1]) / beta;
        }
        for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i + 1] * x[i + 1];
        return x;
    };
    // Sherman-Morrison removal of the periodic corners.
    cplx alpha = sub[0];    // A(0, n-1)
    cplx beta = sup[n - 1]; // A(n-1, 0)
    cplx gamma = -diag[0];
    std::vector<cplx> b = diag;
    b[0] -= gamma;
    b[n - 1] -= alpha * beta / gamma;
    std::vector<cplx> x = thomas(b, rhs);
    std::vector<cplx> u(n, cplx{0.0, 0.0});
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<cplx> z = thomas(b, u);
    cplx factor = (x[0] + beta * x[n - 1] / gamma) /
                  (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= factor * z[i];
    return x;
}

std::vector<cplx> CrankNicolsonStepper::apply_fd_hamiltonian(
    const std::vector<cplx>& v) const {
    const Grid& g = h_->grid();
    std::vector<cplx> out(v.size());
    if (g.dims() == 1) {
        const Axis& ax = g.axis(0);
        double t = h_->hbar() * h_->hbar() / (2.0 * h_->mass(0) * ax.dx * ax.dx);
        int n = ax.n;
        for (int i = 0; i < n; ++i) {
            const cplx lap = v[(i + 1) % n] - 2.0 * v[i] + v[(i + n - 1) % n];
            out[i] = -t * lap + h_->potential()[i] * v[i];
        }
        return out;
    }
    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    double t0 = h_->hbar() * h_->hbar() / (2.0 * h_->mass(0) * g.axis(0).dx * g.axis(0).dx);
    double t1 = h_->hbar() * h_->hbar() / (2.0 * h_->mass(1) * g.axis(1).dx * g.axis(1).dx);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            auto at = [&](int a, int b) {
                return v[static_cast<std::size_t>((a + n0) % n0) * n1 + (b + n1) % n1];
            };
            std::size_t idx = static_cast<std::size_t>(i) * n1 + j;
            cplx lap0 = at(i + 1, j) - 2.0 * v[idx] + at(i - 1, j);
            cplx lap1 = at(i, j + 1) - 2.0 * v[idx] + at(i, j - 1);
            out[idx] = -t0 * lap0 - t1 * lap1 + h_->potential()[idx] * v[idx];
        }
    return out;
}

std::vector<cplx> CrankNicolsonStepper::adi_solve(const std::vector<cplx>& rhs) const {
    const Grid& g = h_->grid();
    const int n0 = g.axis(0).n, n1 = g.axis(1).n;
    const cplx il{0.0, lambda_};
    double t0 = h_->hbar() * h_->hbar() / (2.0 * h_->mass(0) * g.axis(0).dx * g.axis(0).dx);
    double t1 = h_->hbar() * h_->hbar() / (2.0 * h_->mass(1) * g.axis(1).dx * g.axis(1).dx);

    // Sweep along axis 0: (1 + i lambda (T0_fd + V/2)) y = rhs, column by column.
    std::vector<cplx> y(rhs.size());
    {
        std::vector<cplx> sub(n0, il * (-t0)), sup(n0, il * (-t0));
        std::vector<cplx> diag(n0), col(n0);
        for (int j = 0; j < n1; ++j) {
            for (int i = 0; i < n0; ++i) {
                std::size_t idx = static_cast<std::size_t>(i) * n1 + j;
                diag[i] = 1.0 + il * (2.0 * t0 + 0.5 * h_->potential()[idx]);
                col[i] = rhs[idx];
            }
            auto sol = solve_cyclic_tridiagonal(sub, diag, sup, col);
            for (int i = 0; i < n0; ++i) y[static_cast<std::size_t>(i) * n1 + j] = sol[i];
        }
    }
    // Sweep along axis 1: (1 + i lambda (T1_fd + V/2)) x = y, row by row.
    std::vector<cplx> x(rhs.size());
    {
        std::vector<cplx> sub(n1, il * (-t1)), sup(n1, il * (-t1));
        std::vector<cplx> diag(n1), row(n1);
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                std::size_t idx = static_cast<std::size_t>(i) * n1 + j;
                diag[j] = 1.0 + il * (2.0 * t1 + 0.5 * h_->potential()[idx]);
                row[j] = y[idx];
            }
            auto sol = solve_cyclic_tridiagonal(sub, diag, sup, row);
            for (int j = 0; j < n1; ++j) x[static_cast<std::size_t>(i) * n1 + j] = sol[j];
        }
    }
    return x;
}

void CrankNicolsonStepper::step(WaveFunction& psi) const {
    if (psi.grid() != h_->grid())
        throw std::invalid_argument("crank_nicolson: grid mismatch");
    const Grid& g = h_->grid();
    const cplx il{0.0, lambda_};

    std::vector<cplx> hpsi = apply_fd_hamiltonian(psi.amp());
    std::vector<cplx> rhs(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) rhs[i] = psi[i] - il * hpsi[i];

    if (g.dims() == 1) {
        const Axis& ax = g.axis(0);
        double t = h_->hbar() * h_->hbar() / (2.0 * h_->mass(0) * ax.dx * ax.dx);
        std::vector<cplx> sub(ax.n, il * (-t)), sup(ax.n, il * (-t)), diag(ax.n);
        for (int i = 0; i < ax.n; ++i)
            diag[i] = 1.0 + il * (2.0 * t + h_->potential()[i]);
        psi.amp() = solve_cyclic_tridiagonal(sub, diag, sup, rhs);
        return;
    }

    // 2D: refine the factorized ADI solve until the true Crank-Nicolson
    // system is satisfied to near machine precision.
    double rhs_norm = 0.0;
    for (const cplx& v : rhs) rhs_norm += std::norm(v);
    rhs_norm = std::sqrt(rhs_norm);

    std::vector<cplx> x = adi_solve(rhs);
    constexpr int kMaxIter = 60;
    for (int it = 0; it < kMaxIter; ++it) {
        std::vector<cplx> hx = apply_fd_hamiltonian(x);
        std::vector<cplx> residual(x.size());
        double rnorm = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            residual[i] = rhs[i] - (x[i] + il * hx[i]);
            rnorm += std::norm(residual[i]);
        }
        rnorm = std::sqrt(rnorm);
        if (rnorm <= 1e-13 * rhs_norm) {
            psi.amp() = std::move(x);
            return;
        }
        std::vector<cplx> corr = adi_solve(residual);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += corr[i];
    }
    throw std::runtime_error("crank_nicolson: 2D linear solve did not converge");
}

}  // namespace pqt
