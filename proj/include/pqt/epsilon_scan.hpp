#pragma once

#include <optional>
#include <vector>

#include "pqt/decay.hpp"
#include "pqt/scattering.hpp"

namespace pqt {

struct EpsilonScanRow {
    double epsilon = 0.0;
    std::size_t n = 0;
    double collapse_fraction = 0.0;
    std::optional<double> mean_collapse_time;
    double observable = 0.0;  // visibility (scattering) or max fit residual (decay)
    double deviation = 0.0;   // |observable - oqt observable|
};

struct EpsilonScanResult {
    std::vector<EpsilonScanRow> rows;
    double oqt_observable = 0.0;
    /// Smallest scanned epsilon whose deviation exceeds the threshold.
    std::optional<double> smallest_detectable_epsilon;
};

/// Scattering scan: the deterministic trace is epsilon-independent, so
/// a single unitary run answers every threshold; per epsilon only the
/// Born draws and readout detections are resampled.
EpsilonScanResult scan_epsilon_scattering(const ScatteringConfig& base,
                                          const std::vector<double>& epsilons,
                                          std::size_t n_per_point,
                                          std::uint64_t master_seed,
                                          double detect_threshold);

/// Decay scan: per epsilon the deterministic segment is recomputed on
/// the shared eigendecomposition; the observable is the largest relative
/// residual of a full-horizon exponential fit to the ensemble survival.
EpsilonScanResult scan_epsilon_decay(const DecayConfig& base,
                                     const std::vector<double>& epsilons,
                                     std::size_t n_per_point,
                                     std::uint64_t master_seed,
                                     double detect_threshold);

}  // namespace pqt
