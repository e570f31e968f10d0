#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pqt/random_stream.hpp"

namespace pqt {

struct WilsonInterval {
    double center = 0.0;
    double low = 0.0;
    double high = 0.0;
};
/// Wilson score interval for a binomial proportion at normal quantile z.
WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    bool degenerate_fail = false;  // expected 0 with nonzero count
};
/// Pearson chi-square of observed counts against expected probabilities.
ChiSquareResult chi_square_test(const std::vector<std::size_t>& counts,
                                const std::vector<double>& probabilities);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};
/// One-sample Kolmogorov-Smirnov test against U[0,1); asymptotic p-value.
KsResult ks_uniform_test(std::vector<double> samples);

double pearson_correlation(const std::vector<double>& a, const std::vector<double>& b);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Bootstrap standard error of a statistic over resampled indices.
template <typename Fn>
double bootstrap_standard_error(std::size_t n_samples, int n_resamples,
                                RandomStream& rng, Fn statistic) {
    std::vector<std::size_t> idx(n_samples);
    std::vector<double> values;
    values.reserve(n_resamples);
    for (int r = 0; r < n_resamples; ++r) {
        for (std::size_t i = 0; i < n_samples; ++i)
            idx[i] = static_cast<std::size_t>(rng.uniform_below(n_samples));
        values.push_back(statistic(idx));
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    return values.size() > 1 ? std::sqrt(var / (values.size() - 1)) : 0.0;
}

}  // namespace pqt
