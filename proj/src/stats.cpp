#include "smc/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "smc/error.hpp"

namespace smc::stats {

Summary summarize(std::span<const double> values)
{
    Summary s;
    s.count = values.size();
    if (s.count == 0) return s;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.mean = mean;
    s.variance = s.count > 1 ? ss / static_cast<double>(s.count - 1) : 0.0;
    s.standard_error = std::sqrt(s.variance / static_cast<double>(s.count));
    return s;
}

double chi_square_p_value(std::span<const std::size_t> counts, std::span<const double> probabilities)
{
    if (counts.size() != probabilities.size()) fail(Errc::DimensionMismatch, "chi-square: size mismatch");
    std::size_t total = 0;
    for (std::size_t c : counts) total += c;
    double statistic = 0.0;
    std::size_t categories = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const double expected = probabilities[i] * static_cast<double>(total);
        if (expected <= 0.0) {
            if (counts[i] > 0) return 0.0;
            continue;
        }
        ++categories;
        const double diff = static_cast<double>(counts[i]) - expected;
        statistic += diff * diff / expected;
    }
    if (categories < 2) return 1.0;
    const boost::math::chi_squared dist(static_cast<double>(categories - 1));
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

double sign_test_upper_p_value(std::size_t successes, std::size_t trials)
{
    if (successes == 0) return 1.0;
    const boost::math::binomial dist(static_cast<double>(trials), 0.5);
    return boost::math::cdf(boost::math::complement(dist, static_cast<double>(successes) - 1.0));
}

double sign_test_p_value(std::size_t successes, std::size_t trials)
{
    const std::size_t extreme = std::max(successes, trials - successes);
    return std::min(1.0, 2.0 * sign_test_upper_p_value(extreme, trials));
}

double total_variation(std::span<const double> p, std::span<const double> q)
{
    if (p.size() != q.size()) fail(Errc::DimensionMismatch, "total variation: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

double median(std::vector<double> values)
{
    if (values.empty()) return std::nan("");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::pair<double, double> median_interval(std::vector<double> values, double level)
{
    if (values.empty()) fail(Errc::InvalidArgument, "median_interval of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const boost::math::binomial dist(static_cast<double>(n), 0.5);
    const double tail = 0.5 * (1.0 - level);
    // Largest j with P(X < j) <= tail; the interval is (x_(j), x_(n-j+1)), 1-based.
    std::size_t j = 0;
    while (j + 1 <= n / 2 && boost::math::cdf(dist, static_cast<double>(j)) <= tail) ++j;
    if (j == 0) return {values.front(), values.back()};
    return {values[j - 1], values[n - j]};
}

}  // namespace smc::stats
