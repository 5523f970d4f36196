#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace smc::stats {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased sample variance
    double standard_error = 0.0;
};

Summary summarize(std::span<const double> values);

/// Pearson chi-square goodness-of-fit p-value for observed counts against
/// expected probabilities; categories with zero probability must have zero
/// counts (otherwise p = 0).
double chi_square_p_value(std::span<const std::size_t> counts, std::span<const double> probabilities);

/// Two-sided exact binomial sign test p-value for `successes` out of `trials`.
double sign_test_p_value(std::size_t successes, std::size_t trials);

/// One-sided sign test: P(X >= successes) under Binomial(trials, 1/2).
double sign_test_upper_p_value(std::size_t successes, std::size_t trials);

/// Total variation distance between two probability vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

double median(std::vector<double> values);

/// Distribution-free interval for the median from order statistics, with
/// coverage at least `level`. Falls back to (min, max) for tiny samples.
std::pair<double, double> median_interval(std::vector<double> values, double level = 0.95);

}  // namespace smc::stats
