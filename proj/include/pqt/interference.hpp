#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "pqt/random_stream.hpp"
#include "pqt/wavefunction.hpp"

namespace pqt {

/// Idealized recombination leg: the two channel components are brought
/// onto a common readout axis as plane-wave modes with a relative
/// transverse phase, so the screen intensity is
///   I(x) = |a_a * exp(i*2*pi*harmonic*x/L) + a_b|^2 .
/// `harmonic` is the integer number of fringe cycles across the window,
/// which keeps the fringe period commensurate with the bin grid.
struct ReadoutSpec {
    std::size_t n_bins = 256;
    int harmonic = 4;
    void validate() const;
};

/// Amplitudes of a final state on the two channel modes.
struct TwoModeState {
    std::complex<double> a_a{0.0, 0.0};
    std::complex<double> a_b{0.0, 0.0};
};

/// Per-bin intensity of one state at the readout.
std::vector<double> fringe_profile(const TwoModeState& state, const ReadoutSpec& spec);

/// Fringe contrast (I_max - I_min)/(I_max + I_min) extracted as the
/// first-harmonic Fourier contrast 2|c_h|/c_0, which coincides with the
/// max/min definition for sinusoidal fringes and stays well-defined on
/// noisy histograms.
double visibility_from_profile(const std::vector<double>& profile, int harmonic);

/// Exact visibility of a single two-mode state: 2|a_a||a_b|/(|a_a|^2+|a_b|^2).
double visibility(const TwoModeState& state);

/// Visibility of the mean density of an ensemble of states (each member
/// contributes its exact profile).
double ensemble_mean_visibility(const std::vector<TwoModeState>& states,
                                const ReadoutSpec& spec);

/// One detection event: a bin index sampled from the state's normalized
/// intensity profile. Each experimental repetition detects once.
std::size_t sample_detection(const TwoModeState& state, const ReadoutSpec& spec,
                             RandomStream& stream);

struct VisibilityEstimate {
    double value = 0.0;
    double bootstrap_se = 0.0;
    std::size_t n = 0;
};

/// Visibility of the detection histogram, with a bootstrap standard
/// error over detections (default 1000 resamples).
VisibilityEstimate visibility_from_detections(const std::vector<std::size_t>& bins,
                                              const ReadoutSpec& spec,
                                              RandomStream& bootstrap_stream,
                                              int resamples = 1000);

}  // namespace pqt
