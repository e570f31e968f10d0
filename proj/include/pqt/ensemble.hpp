#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pqt/random_stream.hpp"
#include "pqt/stats.hpp"

namespace pqt {

struct EnsembleSpec {
    std::size_t n_trajectories = 1;
    std::uint64_t master_seed = 0;
    /// Parallelism hint; no effect on any result.
    int threads = 1;
};

struct TrajectoryRecord {
    std::size_t index = 0;
    std::string outcome;
    std::optional<double> event_time;
    double p_a = 0.0, p_b = 0.0;  // probabilities at trigger (when meaningful)
    std::map<std::string, double> diagnostics;
};

/// Runs `fn(index, stream)` for every trajectory. Each trajectory
/// consumes only its derived stream; records are merged in index order,
/// so the output is a pure function of (fn, spec) regardless of thread
/// count. Any trajectory error aborts the ensemble with its index.
std::vector<TrajectoryRecord> run_ensemble(
    const EnsembleSpec& spec,
    const std::function<TrajectoryRecord(std::size_t, RandomStream&)>& fn);

struct OutcomeFrequency {
    std::string label;
    std::size_t count = 0;
    WilsonInterval frequency;
};

struct EnsembleStats {
    std::size_t n = 0;
    std::vector<OutcomeFrequency> outcomes;  // sorted by label
    std::optional<double> mean_event_time;
    std::optional<double> sd_event_time;
};

EnsembleStats summarize(const std::vector<TrajectoryRecord>& records);

/// Pearson chi-square of outcome labels against expected probabilities;
/// requires at least 100 records.
ChiSquareResult channel_frequency_test(const std::vector<TrajectoryRecord>& records,
                                       const std::vector<std::string>& labels,
                                       const std::vector<double>& probabilities);

}  // namespace pqt
