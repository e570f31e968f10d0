#include "pqt/wavefunction.hpp"

#include <cmath>
#include <stdexcept>

namespace pqt {

WaveFunction::WaveFunction(Grid grid, std::vector<std::string> labels)
    : grid_(std::move(grid)), amp_(grid_.size(), cplx{0.0, 0.0}),
      labels_(std::move(labels)) {}

WaveFunction::WaveFunction(Grid grid, std::vector<cplx> amplitudes,
                           std::vector<std::string> labels)
    : grid_(std::move(grid)), amp_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (amp_.size() != grid_.size())
        throw std::invalid_argument("wavefunction: amplitude shape does not match grid");
}

cplx inner_product(const WaveFunction& bra, const WaveFunction& ket) {
    if (bra.grid() != ket.grid())
        throw std::invalid_argument("inner_product: grid mismatch");
    cplx acc{0.0, 0.0};
    const auto& a = bra.amp();
    const auto& b = ket.amp();
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc * bra.grid().cell_volume();
}

double norm(const WaveFunction& psi) {
    double s = 0.0;
    for (const cplx& v : psi.amp()) s += std::norm(v);
    return std::sqrt(s * psi.grid().cell_volume());
}

WaveFunction normalize(const WaveFunction& psi) {
    double n = norm(psi);
    if (!(n > 0.0)) throw std::runtime_error("normalize: null state");
    WaveFunction out = psi;
    double inv = 1.0 / n;
    for (cplx& v : out.amp()) v *= inv;
    return out;
}

void require_normalized(const WaveFunction& psi, double tol) {
    if (std::abs(norm(psi) - 1.0) > tol)
        throw std::runtime_error("state is not normalized");
}

WaveFunction operator*(cplx a, const WaveFunction& psi) {
    WaveFunction out = psi;
    for (cplx& v : out.amp()) v *= a;
    return out;
}

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("wavefunction add: grid mismatch");
    WaveFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

WaveFunction operator-(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("wavefunction sub: grid mismatch");
    WaveFunction out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

}  // namespace pqt
