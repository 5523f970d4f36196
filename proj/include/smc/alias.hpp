#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smc/rng.hpp"

namespace smc {

/// Walker/Vose alias table: O(N) construction, O(1) draws.
class AliasTable {
public:
    AliasTable() = default;

    /// Throws NegativeWeight for negative or NaN entries, AllWeightsZero when
    /// no entry is strictly positive.
    static AliasTable build(std::span<const double> weights);

    std::size_t draw(RngStream& rng) const noexcept;

    std::size_t size() const noexcept { return probability_.size(); }
    std::span<const double> probability() const noexcept { return probability_; }
    std::span<const std::size_t> alias() const noexcept { return alias_; }
    double total_weight() const noexcept { return total_; }

private:
    std::vector<double> probability_;
    std::vector<std::size_t> alias_;
    double total_ = 0.0;
};

}  // namespace smc
