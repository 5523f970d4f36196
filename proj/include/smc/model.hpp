#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "smc/rng.hpp"

namespace smc {

using State = std::span<const double>;
using StateOut = std::span<double>;

/// Fixed-capacity vector for per-particle scratch work; never touches the heap.
inline constexpr int kMaxStateDim = 32;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxStateDim, 1>;

inline Eigen::Map<const Eigen::VectorXd> as_vector(State x)
{
    return {x.data(), static_cast<Eigen::Index>(x.size())};
}

/**
 * A Feynman-Kac model: initial law, Markov transitions with densities, and
 * potentials evaluated at a fixed data record.
 *
 * Transition densities are with respect to Lebesgue measure for continuous
 * state spaces and counting measure for discrete ones. Time indices beyond the
 * data record carry the unit potential, so a record of T observations defines
 * the law of X_{0:T} given Y_{0:T-1}.
 */
class StateSpaceModel {
public:
    virtual ~StateSpaceModel() = default;

    virtual std::size_t state_dim() const = 0;

    virtual void init_sample(RngStream& rng, StateOut out) const = 0;
    virtual void transition_sample(std::size_t s, State x, RngStream& rng, StateOut out) const = 0;
    virtual double transition_density(std::size_t s, State x, State x_next) const = 0;
    /// Uniform bound on transition_density(s, ., .) when one exists.
    virtual std::optional<double> transition_density_upper(std::size_t /*s*/) const { return std::nullopt; }
    virtual double potential(std::size_t s, State x) const = 0;
    virtual double log_potential(std::size_t s, State x) const;
};

}  // namespace smc
