#pragma once

#include <complex>
#include <string>
#include <vector>

#include "pqt/grid.hpp"

namespace pqt {

using cplx = std::complex<double>;

struct UnitsConfig {
    double hbar = 1.0;
    std::string length_label = "l";
    std::string time_label = "t";
    std::string mass_label = "m";
};

/// Complex amplitude field on a grid. Amplitudes carry units of
/// length^(-dims/2) so that the dx-weighted L2 norm is dimensionless.
class WaveFunction {
  public:
    WaveFunction(Grid grid, std::vector<std::string> labels = {});
    WaveFunction(Grid grid, std::vector<cplx> amplitudes,
                 std::vector<std::string> labels = {});

    const Grid& grid() const { return grid_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::vector<cplx>& amp() { return amp_; }
    const std::vector<cplx>& amp() const { return amp_; }
    cplx& operator[](std::size_t i) { return amp_[i]; }
    const cplx& operator[](std::size_t i) const { return amp_[i]; }
    std::size_t size() const { return amp_.size(); }

    /// Row-major index, axis 0 slowest.
    std::size_t index(int i0, int i1 = 0) const {
        if (grid_.dims() == 1) return static_cast<std::size_t>(i0);
        return static_cast<std::size_t>(i0) * grid_.axis(1).n + i1;
    }

  private:
    Grid grid_;
    std::vector<cplx> amp_;
    std::vector<std::string> labels_;
};

/// Discrete L2 inner product with conjugation on the bra and uniform
/// dx weights. Throws on grid mismatch.
cplx inner_product(const WaveFunction& bra, const WaveFunction& ket);

double norm(const WaveFunction& psi);

/// Returns psi / ||psi||. Throws "null state" on zero norm.
WaveFunction normalize(const WaveFunction& psi);

/// Asserts |norm - 1| <= tol, used as a precondition by consumers.
void require_normalized(const WaveFunction& psi, double tol = 1e-10);

WaveFunction operator*(cplx a, const WaveFunction& psi);
WaveFunction operator+(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator-(const WaveFunction& a, const WaveFunction& b);

}  // namespace pqt
