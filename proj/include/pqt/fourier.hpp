#pragma once

#include "pqt/wavefunction.hpp"

namespace pqt {

enum class FourierDirection { Forward, Inverse };

/// Unitary DFT with symmetric 1/sqrt(N) normalization; forward followed
/// by inverse is the identity and the dx-weighted norm is preserved.
WaveFunction momentum_transform(const WaveFunction& psi, FourierDirection dir);

/// In-place transform on a raw buffer of the given grid shape.
void fft_inplace(std::vector<cplx>& data, const Grid& grid, FourierDirection dir);

}  // namespace pqt
