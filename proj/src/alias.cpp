#include "smc/alias.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc {

AliasTable AliasTable::build(std::span<const double> weights)
{
    const std::size_t n = weights.size();
    if (n == 0) fail(Errc::AllWeightsZero, "empty weight vector");

    double total = 0.0;
    std::size_t heaviest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weights[i];
        if (!(w >= 0.0)) fail(Errc::NegativeWeight, fmt::format("weight {} is {}", i, w));
        total += w;
        if (w > weights[heaviest]) heaviest = i;
    }
    if (!(total > 0.0)) fail(Errc::AllWeightsZero, fmt::format("all {} weights are zero", n));
    if (!std::isfinite(total)) fail(Errc::NegativeWeight, "weights sum to a non-finite value");

    AliasTable table;
    table.total_ = total;
    table.probability_.resize(n);
    table.alias_.resize(n);

    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    small.reserve(n);
    large.reserve(n);
    const double scale = static_cast<double>(n) / total;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * scale;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }

    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        table.probability_[s] = scaled[s];
        table.alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (std::size_t l : large) {
        table.probability_[l] = 1.0;
        table.alias_[l] = l;
    }
    // Round-off leftovers: keep zero-mass categories unreachable.
    for (std::size_t s : small) {
        if (weights[s] > 0.0) {
            table.probability_[s] = 1.0;
            table.alias_[s] = s;
        } else {
            table.probability_[s] = 0.0;
            table.alias_[s] = heaviest;
        }
    }
    return table;
}

std::size_t AliasTable::draw(RngStream& rng) const noexcept
{
    const std::size_t n = probability_.size();
    const double u = rng.uniform() * static_cast<double>(n);
    std::size_t column = static_cast<std::size_t>(u);
    if (column >= n) column = n - 1;
    const double frac = u - static_cast<double>(column);
    return frac < probability_[column] ? column : alias_[column];
}

}  // namespace smc
