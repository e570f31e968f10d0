#include "pqt/plate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pqt {

void PlateConfig::validate() const {
    if (psi.grid().dims() != 1)
        throw std::invalid_argument("plate: psi must be one-dimensional");
    require_normalized(psi);
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("plate: eta must lie in (0,1]");
    if (cells.empty()) throw std::invalid_argument("plate: no detector cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (!(cells[i].lo < cells[i].hi))
            throw std::invalid_argument("plate: cell with nonpositive width");
        if (i > 0 && cells[i].lo < cells[i - 1].hi)
            throw std::invalid_argument("plate: cells overlap or are out of order");
    }
}

std::vector<double> plate_probabilities(const PlateConfig& cfg) {
    cfg.validate();
    const Axis& ax = cfg.psi.grid().axis(0);
    std::vector<double> p(cfg.cells.size(), 0.0);
    for (int i = 0; i < ax.n; ++i) {
        double x = ax.x(i);
        double mass = std::norm(cfg.psi[i]) * ax.dx;
        for (std::size_t c = 0; c < cfg.cells.size(); ++c) {
            if (x >= cfg.cells[c].lo && x < cfg.cells[c].hi) {
                p[c] += cfg.eta * mass;
                break;
            }
        }
    }
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (total > 1.0 + 1e-9)
        throw std::invalid_argument("plate: site probabilities exceed 1");
    return p;
}

PlateOutcome run_plate(const PlateConfig& cfg, RandomStream& stream) {
    std::vector<double> p = plate_probabilities(cfg);
    double u = stream.uniform();
    double acc = 0.0;
    for (std::size_t c = 0; c < p.size(); ++c) {
        acc += p[c];
        if (u < acc) return {c};
    }
    return {std::nullopt};
}

}  // namespace pqt
