#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "smc/functional.hpp"
#include "smc/model.hpp"
#include "smc/particle_cloud.hpp"
#include "smc/rng.hpp"

namespace smc {

/// Ancestor entry of a pinned (conditional) particle that has no genealogy.
inline constexpr std::size_t kNoAncestor = std::numeric_limits<std::size_t>::max();

/// N i.i.d. draws from the initial law; particle i uses rng.split(i).
ParticleCloud pf_init(const StateSpaceModel& model, std::size_t n, const RngStream& rng);

struct FilterStep {
    std::vector<std::size_t> ancestors;
    ParticleCloud next;
};

/// Multinomial selection proportional to the cached potentials followed by
/// mutation through the transition kernel. Particle i uses rng.split(i).
FilterStep pf_step(const StateSpaceModel& model, const ParticleCloud& cloud, const RngStream& rng);

/// Poor man's smoother: b_{s+1}^i = b_s^{A^i} + term(s, xi_s^{A^i}, xi_{s+1}^i).
BackwardStats genealogy_update(const BackwardStats& prev_stats, std::span<const std::size_t> ancestors,
                               const AdditiveFunctional& functional, const ParticleCloud& prev_cloud,
                               const ParticleCloud& next_cloud);

struct LogLikelihoodEstimate {
    double value;    ///< -inf when the filter collapsed
    bool collapsed;  ///< all potentials vanished at some time
};

/// sum_{s=0}^{T} log(N^{-1} sum_i g_s(xi_s^i)) from a bootstrap filter run for T steps.
LogLikelihoodEstimate pf_loglik(const StateSpaceModel& model, std::size_t horizon, std::size_t n,
                                const RngStream& rng);

/// Log of the mean potential of a cloud; switches to log-space accumulation
/// when any potential is below 1e-300.
double log_mean_potential(const StateSpaceModel& model, const ParticleCloud& cloud);

struct FilterTrajectory {
    std::vector<ParticleCloud> clouds;               ///< times 0..T
    std::vector<std::vector<std::size_t>> ancestors; ///< ancestors[s] links time s+1 to time s
};

/// Bootstrap filter over T steps keeping every generation.
FilterTrajectory pf_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n, const RngStream& rng);

/// State path (dim x (T+1)) obtained by tracing the genealogy of particle
/// `index` of the final cloud.
Eigen::MatrixXd trace_genealogy(const FilterTrajectory& run, std::size_t index);

}  // namespace smc
