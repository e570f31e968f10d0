#include "pqt/dense_oracle.hpp"

#include <Eigen/Dense>

#include <stdexcept>

#include "pqt/fourier.hpp"

namespace pqt {

WaveFunction dense_oracle_evolve(const WaveFunction& psi0, const GridHamiltonian& h,
                                 double t) {
    if (psi0.grid() != h.grid())
        throw std::invalid_argument("dense_oracle: grid mismatch");
    const std::size_t n = h.grid().size();
    if (n > 4096) throw std::invalid_argument("dense_oracle: dimension cap exceeded");
    for (int d = 0; d < h.grid().dims(); ++d)
        if (h.grid().axis(d).n > 64)
            throw std::invalid_argument("dense_oracle: more than 64 points per axis");

    using Mat = Eigen::MatrixXcd;
    using Vec = Eigen::VectorXcd;

    // Kinetic matrix columns: apply the momentum-space multiplier to
    // each position basis vector.
    Mat H = Mat::Zero(n, n);
    std::vector<cplx> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
        col[j] = 1.0;
        fft_inplace(col, h.grid(), FourierDirection::Forward);
        for (std::size_t i = 0; i < n; ++i) col[i] *= h.kinetic()[i];
        fft_inplace(col, h.grid(), FourierDirection::Inverse);
        for (std::size_t i = 0; i < n; ++i) H(i, j) = col[i];
    }
    for (std::size_t i = 0; i < n; ++i) H(i, i) += h.potential()[i];

    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dense_oracle: eigendecomposition failed");

    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v(i) = psi0[i];
    Vec c = es.eigenvectors().adjoint() * v;
    for (std::size_t i = 0; i < n; ++i) {
        double angle = -es.eigenvalues()(i) * t / h.hbar();
        c(i) *= cplx{std::cos(angle), std::sin(angle)};
    }
    Vec out = es.eigenvectors() * c;

    WaveFunction psi = psi0;
    for (std::size_t i = 0; i < n; ++i) psi[i] = out(i);
    return psi;
}

}  // namespace pqt
