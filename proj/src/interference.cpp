#include "pqt/interference.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pqt/stats.hpp"

namespace pqt {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void ReadoutSpec::validate() const {
    if (harmonic < 1) throw std::invalid_argument("readout: harmonic must be >= 1");
    if (n_bins < 4 * static_cast<std::size_t>(harmonic))
        throw std::invalid_argument("readout: n_bins must resolve the fringe (>= 4*harmonic)");
}

std::vector<double> fringe_profile(const TwoModeState& state, const ReadoutSpec& spec) {
    spec.validate();
    std::vector<double> out(spec.n_bins);
    for (std::size_t i = 0; i < spec.n_bins; ++i) {
        double phase = 2.0 * kPi * spec.harmonic * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(spec.n_bins);
        std::complex<double> amp =
            state.a_a * std::complex<double>(std::cos(phase), std::sin(phase)) + state.a_b;
        out[i] = std::norm(amp);
    }
    return out;
}

double visibility_from_profile(const std::vector<double>& profile, int harmonic) {
    if (profile.size() < 4 * static_cast<std::size_t>(harmonic))
        throw std::invalid_argument("visibility: profile too short for harmonic");
    double c0 = 0.0, re = 0.0, im = 0.0;
    const double n = static_cast<double>(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        double phase = 2.0 * kPi * harmonic * (static_cast<double>(i) + 0.5) / n;
        c0 += profile[i];
        re += profile[i] * std::cos(phase);
        im += profile[i] * std::sin(phase);
    }
    if (c0 <= 0.0) throw std::invalid_argument("readout misconfigured: empty profile");
    return 2.0 * std::hypot(re, im) / c0;
}

double visibility(const TwoModeState& state) {
    double pa = std::norm(state.a_a), pb = std::norm(state.a_b);
    if (pa + pb <= 0.0) throw std::invalid_argument("readout misconfigured: null state");
    return 2.0 * std::sqrt(pa * pb) / (pa + pb);
}

double ensemble_mean_visibility(const std::vector<TwoModeState>& states,
                                const ReadoutSpec& spec) {
    if (states.empty()) throw std::invalid_argument("readout misconfigured: empty ensemble");
    std::vector<double> mean(spec.n_bins, 0.0);
    for (const auto& s : states) {
        auto p = fringe_profile(s, spec);
        for (std::size_t i = 0; i < spec.n_bins; ++i) mean[i] += p[i];
    }
    return visibility_from_profile(mean, spec.harmonic);
}

std::size_t sample_detection(const TwoModeState& state, const ReadoutSpec& spec,
                             RandomStream& stream) {
    auto profile = fringe_profile(state, spec);
    double total = std::accumulate(profile.begin(), profile.end(), 0.0);
    if (total <= 0.0) throw std::invalid_argument("readout misconfigured: null state");
    double u = stream.uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        acc += profile[i];
        if (u < acc) return i;
    }
    return profile.size() - 1;
}

VisibilityEstimate visibility_from_detections(const std::vector<std::size_t>& bins,
                                              const ReadoutSpec& spec,
                                              RandomStream& bootstrap_stream,
                                              int resamples) {
    spec.validate();
    if (bins.empty()) throw std::invalid_argument("visibility: no detections");
    auto vis_of = [&](const std::vector<std::size_t>& sample) {
        std::vector<double> hist(spec.n_bins, 0.0);
        for (std::size_t b : sample) {
            if (b >= spec.n_bins) throw std::invalid_argument("visibility: bin out of range");
            hist[b] += 1.0;
        }
        return visibility_from_profile(hist, spec.harmonic);
    };
    VisibilityEstimate est;
    est.n = bins.size();
    est.value = vis_of(bins);
    est.bootstrap_se = bootstrap_standard_error(
        bins.size(), resamples, bootstrap_stream, [&](const std::vector<std::size_t>& idx) {
            std::vector<std::size_t> sample(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) sample[k] = bins[idx[k]];
            return vis_of(sample);
        });
    return est;
}

}  // namespace pqt
