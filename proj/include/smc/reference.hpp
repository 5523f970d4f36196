#pragma once

// Single-threaded reference versions of the parallel kernels. They consume the
// same random streams, so for a given input they must reproduce the OpenMP
// kernels bit for bit; the test suite and the benchmark rely on that.

#include <cstddef>
#include <vector>

#include "smc/backward.hpp"
#include "smc/filter.hpp"
#include "smc/functional.hpp"
#include "smc/particle_cloud.hpp"

namespace smc::reference {

FilterStep pf_step(const StateSpaceModel& model, const ParticleCloud& cloud, const RngStream& rng);

/// Materializes the full N x N backward kernel before contracting it.
BackwardStats ffbsm_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional);

BackwardStats paris_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional, std::size_t m, const BackwardSamplerConfig& cfg,
                         const RngStream& rng);

}  // namespace smc::reference
