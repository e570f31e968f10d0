#include "pqt/observables.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pqt/fourier.hpp"

namespace pqt {

std::vector<double> position_density(const WaveFunction& psi,
                                     std::optional<int> marginal_axis) {
    if (!marginal_axis) {
        std::vector<double> rho(psi.size());
        for (std::size_t i = 0; i < psi.size(); ++i) rho[i] = std::norm(psi[i]);
        return rho;
    }
    if (psi.grid().dims() != 2)
        throw std::invalid_argument("position_density: marginal needs a 2D state");
    int keep = *marginal_axis;
    if (keep != 0 && keep != 1)
        throw std::invalid_argument("position_density: axis out of range");
    int n0 = psi.grid().axis(0).n;
    int n1 = psi.grid().axis(1).n;
    double w = keep == 0 ? psi.grid().axis(1).dx : psi.grid().axis(0).dx;
    std::vector<double> rho(keep == 0 ? n0 : n1, 0.0);
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j)
            rho[keep == 0 ? i : j] += std::norm(psi[psi.index(i, j)]) * w;
    return rho;
}

namespace {

double weighted_axis_moment(const WaveFunction& psi, int axis, int power,
                            double shift) {
    const Axis& ax = psi.grid().axis(axis);
    double w = psi.grid().cell_volume();
    double acc = 0.0;
    if (psi.grid().dims() == 1) {
        for (int i = 0; i < ax.n; ++i)
            acc += std::pow(ax.x(i) - shift, power) * std::norm(psi[i]) * w;
        return acc;
    }
    int n0 = psi.grid().axis(0).n;
    int n1 = psi.grid().axis(1).n;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n1; ++j) {
            double x = axis == 0 ? psi.grid().axis(0).x(i) : psi.grid().axis(1).x(j);
            acc += std::pow(x - shift, power) * std::norm(psi[psi.index(i, j)]) * w;
        }
    return acc;
}

}  // namespace

double position_expectation(const WaveFunction& psi, int axis) {
    return weighted_axis_moment(psi, axis, 1, 0.0);
}

double position_variance(const WaveFunction& psi, int axis) {
    double mean = position_expectation(psi, axis);
    return weighted_axis_moment(psi, axis, 2, mean);
}

double momentum_expectation(const WaveFunction& psi, int axis, double hbar) {
    WaveFunction phi = momentum_transform(psi, FourierDirection::Forward);
    const Grid& g = psi.grid();
    double w = g.cell_volume();
    double acc = 0.0;
    if (g.dims() == 1) {
        for (int j = 0; j < g.axis(0).n; ++j)
            acc += hbar * g.axis(0).k(j) * std::norm(phi[j]) * w;
        return acc;
    }
    for (int i = 0; i < g.axis(0).n; ++i)
        for (int j = 0; j < g.axis(1).n; ++j) {
            double k = axis == 0 ? g.axis(0).k(i) : g.axis(1).k(j);
            acc += hbar * k * std::norm(phi[phi.index(i, j)]) * w;
        }
    return acc;
}

double boundary_mass(const WaveFunction& psi, double fraction) {
    const Grid& g = psi.grid();
    double w = g.cell_volume();
    double acc = 0.0;
    auto outer = [&](int n, int i) {
        int margin = std::max(1, static_cast<int>(n * fraction));
        return i < margin || i >= n - margin;
    };
    if (g.dims() == 1) {
        for (int i = 0; i < g.axis(0).n; ++i)
            if (outer(g.axis(0).n, i)) acc += std::norm(psi[i]) * w;
        return acc;
    }
    for (int i = 0; i < g.axis(0).n; ++i)
        for (int j = 0; j < g.axis(1).n; ++j)
            if (outer(g.axis(0).n, i) || outer(g.axis(1).n, j))
                acc += std::norm(psi[psi.index(i, j)]) * w;
    return acc;
}

void check_boundary_guard(const WaveFunction& psi, double tol, double fraction,
                          double time_stamp) {
    double m = boundary_mass(psi, fraction);
    if (m > tol) {
        std::ostringstream msg;
        msg << "boundary-mass guard breached at t=" << time_stamp << ": outer "
            << fraction * 100 << "% of the box holds " << m << " > " << tol;
        throw std::runtime_error(msg.str());
    }
}

}  // namespace pqt
