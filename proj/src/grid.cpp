#include "pqt/grid.hpp"

#include <cmath>
#include <numbers>

namespace pqt {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

double Axis::dk() const { return 2.0 * std::numbers::pi / (n * dx); }

double Axis::k(int j) const {
    int jj = (j < n / 2) ? j : j - n;
    return jj * dk();
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || axes_.size() > 2)
        throw std::invalid_argument("grid: only 1D and 2D grids are supported");
    size_ = 1;
    for (const auto& a : axes_) {
        if (a.n < 8) throw std::invalid_argument("grid: need at least 8 points per axis");
        if (!power_of_two(a.n))
            throw std::invalid_argument("grid: points per axis must be a power of two");
        if (!(a.dx > 0.0)) throw std::invalid_argument("grid: dx must be positive");
        size_ *= static_cast<std::size_t>(a.n);
    }
}

double Grid::cell_volume() const {
    double w = 1.0;
    for (const auto& a : axes_) w *= a.dx;
    return w;
}

bool Grid::operator==(const Grid& other) const {
    if (axes_.size() != other.axes_.size()) return false;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        const Axis& a = axes_[d];
        const Axis& b = other.axes_[d];
        if (a.n != b.n || a.x_min != b.x_min || a.dx != b.dx) return false;
    }
    return true;
}

}  // namespace pqt
