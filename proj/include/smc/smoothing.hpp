#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "smc/backward.hpp"
#include "smc/functional.hpp"
#include "smc/model.hpp"
#include "smc/particle_cloud.hpp"
#include "smc/rng.hpp"

namespace smc {

/// Forward-only FFBSm update, O(N^2 d):
/// b_{s+1}^i = sum_l Lambda_s(i, l) (b_s^l + term(s, xi_s^l, xi_{s+1}^i)).
BackwardStats ffbsm_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional);

/// PaRIS update with M backward draws per particle; particle i draws from
/// rng.split(i). When `first_index` is given it receives J^{i,1} for each i.
BackwardStats paris_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional, std::size_t m, const BackwardSamplerConfig& cfg,
                         const RngStream& rng, std::vector<std::size_t>* first_index = nullptr);

struct SmoothingResult {
    Eigen::VectorXd estimate;  ///< N^{-1} sum_i b_T^i
    ParticleCloud final_cloud;
    BackwardStats final_stats;
};

/// Bootstrap filter over T steps with the PaRIS update run alongside.
SmoothingResult paris_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n, std::size_t m,
                          const AdditiveFunctional& functional, const BackwardSamplerConfig& cfg,
                          const RngStream& rng);

/// Same filter streams as paris_run, with the exact FFBSm update.
SmoothingResult ffbsm_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n,
                          const AdditiveFunctional& functional, const RngStream& rng);

}  // namespace smc
