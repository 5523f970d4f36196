#include "smc/particle_cloud.hpp"

#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc {

double StateSpaceModel::log_potential(std::size_t s, State x) const
{
    return std::log(potential(s, x));
}

ParticleCloud::ParticleCloud(const StateSpaceModel& model, std::size_t time_index, Eigen::MatrixXd particles)
    : time_index_(time_index), particles_(std::move(particles))
{
    if (particles_.cols() < 1) fail(Errc::InvalidArgument, "a particle cloud needs at least one particle");
    if (static_cast<std::size_t>(particles_.rows()) != model.state_dim())
        fail(Errc::DimensionMismatch,
             fmt::format("particles have dimension {}, model expects {}", particles_.rows(), model.state_dim()));

    potentials_.resize(size());
    for (std::size_t i = 0; i < size(); ++i) potentials_[i] = model.potential(time_index_, particle(i));

    try {
        selection_ = AliasTable::build(potentials_);
    } catch (const Error& e) {
        if (e.code() == Errc::AllWeightsZero)
            fail(Errc::AllWeightsZero, fmt::format("particle collapse at time {}", time_index_));
        throw;
    }
}

}  // namespace smc
