#include "pqt/packet.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pqt {

WaveFunction gaussian_packet(const Grid& grid, double x0, double p0, double sigma,
                             double hbar, const std::string& label) {
    if (grid.dims() != 1)
        throw std::invalid_argument("gaussian_packet: expects a 1D grid");
    const Axis& ax = grid.axis(0);
    if (!(sigma > 2.0 * ax.dx)) {
        std::ostringstream msg;
        msg << "gaussian_packet: under-resolved width sigma=" << sigma
            << " needs sigma > 2*dx=" << 2.0 * ax.dx;
        throw std::invalid_argument(msg.str());
    }
    // Tail mass of a Gaussian density beyond distance d is erfc(d/(sigma*sqrt(2))).
    double d_lo = x0 - ax.x_min;
    double d_hi = (ax.x_min + ax.length()) - x0;
    double d = std::min(d_lo, d_hi);
    double tail = std::erfc(d / (sigma * std::sqrt(2.0)));
    if (!(tail < 1e-8)) {
        std::ostringstream msg;
        msg << "gaussian_packet: packet leaks outside box, tail mass " << tail
            << " at margin " << d << " (x0=" << x0 << ", sigma=" << sigma << ")";
        throw std::invalid_argument(msg.str());
    }
    WaveFunction psi(grid, {label});
    for (int i = 0; i < ax.n; ++i) {
        double x = ax.x(i);
        double arg = -(x - x0) * (x - x0) / (4.0 * sigma * sigma);
        double phase = p0 * x / hbar;
        psi[i] = std::exp(arg) * cplx{std::cos(phase), std::sin(phase)};
    }
    return normalize(psi);
}

WaveFunction product_state(const WaveFunction& f, const WaveFunction& g) {
    if (f.grid().dims() != 1 || g.grid().dims() != 1)
        throw std::invalid_argument("product_state: factors must be 1D");
    Grid grid({f.grid().axis(0), g.grid().axis(0)});
    std::vector<std::string> labels;
    labels.push_back(f.labels().empty() ? "x0" : f.labels()[0]);
    labels.push_back(g.labels().empty() ? "x1" : g.labels()[0]);
    WaveFunction out(grid, std::move(labels));
    int n1 = g.grid().axis(0).n;
    for (int i = 0; i < f.grid().axis(0).n; ++i)
        for (int j = 0; j < n1; ++j)
            out[out.index(i, j)] = f[i] * g[j];
    return out;
}

}  // namespace pqt
