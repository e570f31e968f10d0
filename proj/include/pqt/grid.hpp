#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqt {

/// Uniform periodic axis; the momentum lattice is the DFT conjugate of
/// the position lattice (k spacing 2*pi/(n*dx), FFT bin ordering).
struct Axis {
    int n = 0;
    double x_min = 0.0;
    double dx = 0.0;

    double x(int i) const { return x_min + i * dx; }
    double length() const { return n * dx; }
    double dk() const;
    /// Momentum of FFT bin j (negative branch for j >= n/2).
    double k(int j) const;
};

class Grid {
  public:
    explicit Grid(std::vector<Axis> axes);

    static Grid line(int n, double x_min, double dx) {
        return Grid({Axis{n, x_min, dx}});
    }
    static Grid plane(const Axis& a0, const Axis& a1) { return Grid({a0, a1}); }

    int dims() const { return static_cast<int>(axes_.size()); }
    std::size_t size() const { return size_; }
    const Axis& axis(int d) const { return axes_.at(d); }
    /// Product of dx over all axes (discrete L2 weight).
    double cell_volume() const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

  private:
    std::vector<Axis> axes_;
    std::size_t size_ = 0;
};

}  // namespace pqt
