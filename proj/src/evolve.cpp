#include "pqt/evolve.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "pqt/observables.hpp"

namespace pqt {

WaveFunction evolve(WaveFunction psi, const GridHamiltonian& h, double t0, double t1,
                    const EvolveOptions& opts, const std::vector<Observer>& observers) {
    double span = t1 - t0;
    if (span < 0.0) throw std::invalid_argument("evolve: t1 < t0");
    double steps_real = span / opts.dt;
    long n_steps = std::lround(steps_real);
    if (std::abs(steps_real - static_cast<double>(n_steps)) > 1e-9)
        throw std::invalid_argument("evolve: (t1-t0)/dt is not integral");

    std::unique_ptr<SplitOperatorStepper> so;
    std::unique_ptr<CrankNicolsonStepper> cn;
    if (opts.scheme == Scheme::SplitOperator)
        so = std::make_unique<SplitOperatorStepper>(h, opts.dt);
    else
        cn = std::make_unique<CrankNicolsonStepper>(h, opts.dt);

    auto notify = [&](long step, double t) {
        for (const auto& obs : observers) obs(step, t, psi);
    };
    notify(0, t0);
    for (long s = 1; s <= n_steps; ++s) {
        if (so)
            so->step(psi);
        else
            cn->step(psi);
        double t = t0 + s * opts.dt;
        if (opts.guard_stride > 0 && (s % opts.guard_stride == 0 || s == n_steps))
            check_boundary_guard(psi, opts.guard_tol, opts.guard_fraction, t);
        if (s % opts.observer_stride == 0 || s == n_steps) notify(s, t);
    }
    return psi;
}

}  // namespace pqt
