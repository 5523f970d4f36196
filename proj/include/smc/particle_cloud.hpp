#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "smc/alias.hpp"
#include "smc/model.hpp"

namespace smc {

/// One generation of particles with cached potentials and the selection
/// table built from them. Immutable after construction.
class ParticleCloud {
public:
    /// `particles` is state_dim x N, one particle per column. Throws
    /// AllWeightsZero when every potential vanishes.
    ParticleCloud(const StateSpaceModel& model, std::size_t time_index, Eigen::MatrixXd particles);

    std::size_t time_index() const noexcept { return time_index_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(particles_.cols()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(particles_.rows()); }

    State particle(std::size_t i) const noexcept
    {
        return {particles_.data() + i * dim(), dim()};
    }
    const Eigen::MatrixXd& particles() const noexcept { return particles_; }

    std::span<const double> potentials() const noexcept { return potentials_; }
    double potential_sum() const noexcept { return selection_.total_weight(); }
    /// Categorical sampler proportional to the potentials.
    const AliasTable& selection() const noexcept { return selection_; }

private:
    std::size_t time_index_;
    Eigen::MatrixXd particles_;
    std::vector<double> potentials_;
    AliasTable selection_;
};

}  // namespace smc
