#pragma once

#include <cstddef>
#include <vector>

#include "smc/model.hpp"
#include "smc/particle_cloud.hpp"
#include "smc/rng.hpp"

namespace smc {

enum class BackwardSamplerKind { Exact, AcceptReject, Hybrid };

struct BackwardSamplerConfig {
    BackwardSamplerKind kind = BackwardSamplerKind::Hybrid;
    /// Hybrid cutoff K; 0 means K = N of the cloud being sampled.
    std::size_t max_trials = 0;
};

/// Throws MissingDensityUpperBound when the config needs a density bound the
/// model cannot provide.
void validate(const BackwardSamplerConfig& cfg, const StateSpaceModel& model);

/// Row of the backward kernel: prob[j] proportional to g_s(xi_s^j) m_s(xi_s^j, x_next).
std::vector<double> backward_row_probs(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next);

/// Index distributed as backward_row_probs. AcceptReject proposes from the
/// cloud's potential-weighted alias table and accepts with m / sup m; Hybrid
/// does the same for at most K trials and then samples the exact row.
std::size_t backward_draw(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next,
                          const BackwardSamplerConfig& cfg, RngStream& rng);

/// Statistics gathered by the samplers (per call, for diagnostics).
struct BackwardDrawInfo {
    std::size_t index;
    std::size_t trials;  ///< accept-reject proposals made
    bool fell_back;      ///< Hybrid switched to the exact row
};

BackwardDrawInfo backward_draw_info(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next,
                                    const BackwardSamplerConfig& cfg, RngStream& rng);

}  // namespace smc
