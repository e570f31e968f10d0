#include "pqt/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pqt {

std::vector<TrajectoryRecord> run_ensemble(
    const EnsembleSpec& spec,
    const std::function<TrajectoryRecord(std::size_t, RandomStream&)>& fn) {
    if (spec.n_trajectories == 0)
        throw std::invalid_argument("ensemble: need at least one trajectory");
    const std::size_t n = spec.n_trajectories;
    std::vector<TrajectoryRecord> records(n);

    int workers = std::max(1, spec.threads);
    std::atomic<std::size_t> cursor{0};
    std::mutex error_mu;
    std::optional<std::string> error;

    auto body = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            {
                std::scoped_lock lock(error_mu);
                if (error) return;
            }
            try {
                RandomStream stream = derive_stream(spec.master_seed, i);
                records[i] = fn(i, stream);
                records[i].index = i;
            } catch (const std::exception& e) {
                std::scoped_lock lock(error_mu);
                if (!error) {
                    std::ostringstream msg;
                    msg << "ensemble: trajectory " << i << " failed: " << e.what();
                    error = msg.str();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    if (error) throw std::runtime_error(*error);
    return records;
}

EnsembleStats summarize(const std::vector<TrajectoryRecord>& records) {
    EnsembleStats stats;
    stats.n = records.size();
    std::map<std::string, std::size_t> counts;
    double sum_t = 0.0, sum_t2 = 0.0;
    std::size_t n_t = 0;
    for (const auto& r : records) {
        ++counts[r.outcome];
        if (r.event_time) {
            sum_t += *r.event_time;
            sum_t2 += *r.event_time * *r.event_time;
            ++n_t;
        }
    }
    for (const auto& [label, count] : counts)
        stats.outcomes.push_back({label, count, wilson_interval(count, records.size())});
    if (n_t > 0) {
        double mean = sum_t / n_t;
        stats.mean_event_time = mean;
        if (n_t > 1)
            stats.sd_event_time = std::sqrt(std::max(0.0, (sum_t2 - n_t * mean * mean) /
                                                              (n_t - 1)));
    }
    return stats;
}

ChiSquareResult channel_frequency_test(const std::vector<TrajectoryRecord>& records,
                                       const std::vector<std::string>& labels,
                                       const std::vector<double>& probabilities) {
    if (records.size() < 100)
        throw std::invalid_argument("channel_frequency_test: need at least 100 records");
    std::vector<std::size_t> counts(labels.size(), 0);
    for (const auto& r : records) {
        auto it = std::find(labels.begin(), labels.end(), r.outcome);
        if (it == labels.end())
            throw std::invalid_argument("channel_frequency_test: unexpected outcome label " +
                                        r.outcome);
        ++counts[static_cast<std::size_t>(it - labels.begin())];
    }
    return chi_square_test(counts, probabilities);
}

}  // namespace pqt
