#include "pqt/epsilon_scan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pqt {

namespace {

void check_grid(const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("epsilon scan: empty grid");
    if (!std::is_sorted(epsilons.begin(), epsilons.end()))
        throw std::invalid_argument("epsilon scan: grid must be sorted ascending");
    for (double e : epsilons)
        if (!(e >= 0.0 && e < 1.0))
            throw std::invalid_argument("epsilon scan: every epsilon must lie in [0,1)");
}

std::uint64_t row_seed(std::uint64_t master_seed, std::size_t row) {
    return master_seed + 0xb5026f5aa96619e9ull * (row + 1);
}

void finish(EpsilonScanResult& out, double detect_threshold) {
    for (const auto& row : out.rows) {
        if (row.deviation > detect_threshold) {
            out.smallest_detectable_epsilon = row.epsilon;
            break;
        }
    }
}

}  // namespace

EpsilonScanResult scan_epsilon_scattering(const ScatteringConfig& base,
                                          const std::vector<double>& epsilons,
                                          std::size_t n_per_point,
                                          std::uint64_t master_seed,
                                          double detect_threshold) {
    check_grid(epsilons);
    if (n_per_point == 0)
        throw std::invalid_argument("epsilon scan: n_per_point must be >= 1");

    ScatteringTrace trace = precompute_scattering(base);
    EpsilonScanResult out;
    out.oqt_observable = visibility(two_mode_state(trace.final_unitary));

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        EpsilonScanRow row;
        row.epsilon = epsilons[e];
        row.n = n_per_point;

        std::optional<std::pair<long, ChannelLogRow>> trig;
        if (epsilons[e] > 0.0) {
            CollapseConfig col = base.collapse;
            col.epsilon = epsilons[e];
            trig = trigger_on_trace(trace, col);
        }
        if (!trig) {
            // No collapse at this threshold: identical to the unitary run.
            row.collapse_fraction = 0.0;
            row.observable = out.oqt_observable;
            row.deviation = 0.0;
            out.rows.push_back(row);
            continue;
        }
        row.collapse_fraction = 1.0;
        row.mean_collapse_time = trig->second.t;

        std::uint64_t seed = row_seed(master_seed, e);
        std::vector<std::size_t> detections(n_per_point);
        for (std::size_t i = 0; i < n_per_point; ++i) {
            RandomStream stream = derive_stream(seed, i);
            char outcome = stream.uniform() < trig->second.ca2 ? 'A' : 'B';
            detections[i] = sample_detection(two_mode_state(outcome), base.readout, stream);
        }
        std::vector<double> hist(base.readout.n_bins, 0.0);
        for (std::size_t b : detections) hist[b] += 1.0;
        row.observable = visibility_from_profile(hist, base.readout.harmonic);
        row.deviation = std::fabs(row.observable - out.oqt_observable);
        out.rows.push_back(row);
    }
    finish(out, detect_threshold);
    return out;
}

EpsilonScanResult scan_epsilon_decay(const DecayConfig& base,
                                     const std::vector<double>& epsilons,
                                     std::size_t n_per_point,
                                     std::uint64_t master_seed,
                                     double detect_threshold) {
    check_grid(epsilons);
    if (n_per_point == 0)
        throw std::invalid_argument("epsilon scan: n_per_point must be >= 1");

    FriedrichsModel model(base);
    SurvivalCurve oqt = run_decay_oqt(model);
    auto max_residual = [](const SurvivalCurve& curve) {
        ExponentialFit fit =
            fit_exponential(curve, curve.t.front(), curve.t.back());
        double worst = 0.0;
        for (double r : fit.relative_residuals) worst = std::max(worst, r);
        return worst;
    };
    EpsilonScanResult out;
    out.oqt_observable = max_residual(oqt);

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        EpsilonScanRow row;
        row.epsilon = epsilons[e];
        row.n = n_per_point;
        if (!(epsilons[e] > 0.0)) {
            row.collapse_fraction = 0.0;
            row.observable = out.oqt_observable;
            row.deviation = 0.0;
            out.rows.push_back(row);
            continue;
        }
        CollapseConfig col = base.collapse;
        col.epsilon = epsilons[e];
        DecaySegment seg = precompute_decay_segment(model, col);
        row.mean_collapse_time = seg.t_trigger;

        std::uint64_t seed = row_seed(master_seed, e);
        std::vector<std::optional<double>> times(n_per_point);
        std::size_t decayed = 0;
        for (std::size_t i = 0; i < n_per_point; ++i) {
            RandomStream stream = derive_stream(seed, i);
            times[i] = run_decay_pqt_trajectory(seg, base.t_max, stream);
            if (times[i]) ++decayed;
        }
        row.collapse_fraction = static_cast<double>(decayed) / n_per_point;

        SurvivalCurve survival;
        long n_boundaries = static_cast<long>(std::floor(base.t_max / seg.t_trigger));
        survival.t.push_back(0.0);
        survival.p.push_back(1.0);
        for (long k = 1; k <= n_boundaries; ++k) {
            double tk = k * seg.t_trigger;
            std::size_t alive = 0;
            for (const auto& td : times)
                if (!td || *td > tk) ++alive;
            survival.t.push_back(tk);
            survival.p.push_back(static_cast<double>(alive) / n_per_point);
        }
        row.observable = max_residual(survival);
        row.deviation = std::fabs(row.observable - out.oqt_observable);
        out.rows.push_back(row);
    }
    finish(out, detect_threshold);
    return out;
}

}  // namespace pqt
