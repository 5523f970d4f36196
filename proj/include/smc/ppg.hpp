#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "smc/backward.hpp"
#include "smc/filter.hpp"
#include "smc/functional.hpp"
#include "smc/model.hpp"
#include "smc/particle_cloud.hpp"
#include "smc/rng.hpp"

namespace smc {

/// Conditioning path zeta_{0:T}, stored as a dim x (T+1) matrix.
struct FrozenPath {
    Eigen::MatrixXd states;

    std::size_t horizon() const noexcept { return static_cast<std::size_t>(states.cols()) - 1; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(states.rows()); }
    State state(std::size_t s) const noexcept { return {states.data() + s * dim(), dim()}; }
};

/// Where the conditional particle goes. Estimator laws are exchangeable in
/// the slot index; First exists for debugging.
enum class SlotPlacement { Uniform, First };

struct ConditionalCloud {
    ParticleCloud cloud;
    std::size_t slot;
};

/// zeta0 at one slot, the other N-1 particles i.i.d. from the initial law.
ConditionalCloud cpf_init(const StateSpaceModel& model, std::size_t n, State zeta0, const RngStream& rng,
                          SlotPlacement placement = SlotPlacement::Uniform);

struct ConditionalStep {
    std::vector<std::size_t> ancestors;  ///< kNoAncestor at the conditional slot
    ParticleCloud next;
    std::size_t slot;
};

/// One conditional filter step: zeta_next pinned at one slot, every other
/// particle selected and mutated as in pf_step (particle i uses rng.split(i)).
ConditionalStep cpf_step(const StateSpaceModel& model, const ParticleCloud& cloud, State zeta_next,
                         const RngStream& rng, SlotPlacement placement = SlotPlacement::Uniform);

/**
 * Clouds, statistics and backward paths of a conditional PaRIS pass up to
 * the current time. Paths are kept as links: particle i of cloud s+1 extends
 * the path of particle links[s][i] of cloud s (its first backward index).
 */
struct ConditionalParisState {
    std::vector<ParticleCloud> clouds;
    std::vector<std::vector<std::size_t>> links;
    std::vector<std::size_t> slots;
    BackwardStats stats;

    std::size_t time_index() const noexcept { return clouds.size() - 1; }
    std::size_t size() const noexcept { return clouds.back().size(); }
    /// Backward path xi_{0:s}^i of particle i of the current cloud.
    Eigen::MatrixXd path(std::size_t i) const;
};

/// Time-zero state: conditional initial cloud and zero statistics.
ConditionalParisState cond_paris_start(const StateSpaceModel& model, std::size_t n, State zeta0,
                                       std::size_t functional_dim, const RngStream& rng,
                                       SlotPlacement placement = SlotPlacement::Uniform);

struct CondParisStreams {
    RngStream filter;    ///< consumed by cpf_step
    RngStream backward;  ///< consumed by the backward draws
};

/// CPF step, M backward draws per particle, statistic update and path
/// extension through J^{i,1}.
ConditionalParisState cond_paris_update(const StateSpaceModel& model, ConditionalParisState prev, State zeta_next,
                                        const AdditiveFunctional& functional, std::size_t m,
                                        const BackwardSamplerConfig& cfg, const CondParisStreams& streams,
                                        SlotPlacement placement = SlotPlacement::Uniform);

struct PpgIterate {
    ConditionalParisState system;  ///< stats at time T and the N backward paths
    FrozenPath new_path;
    std::size_t selected;          ///< which backward path became new_path
    Eigen::VectorXd estimate;      ///< N^{-1} sum_i b_T^i
};

/// One PPG iteration conditioned on `path`; the next conditioning path is
/// one of the N backward paths chosen uniformly.
PpgIterate ppg_iteration(const StateSpaceModel& model, const FrozenPath& path, std::size_t n, std::size_t m,
                         const AdditiveFunctional& functional, const BackwardSamplerConfig& cfg, const RngStream& rng,
                         SlotPlacement placement = SlotPlacement::Uniform);

struct RolloutConfig {
    std::size_t n = 64;
    std::size_t m = 2;
    std::size_t k = 8;
    std::size_t k0 = 4;

    std::size_t budget() const noexcept { return n * k; }
    /// Fraction of iterations entering the estimate, (k - k0) / k.
    double used_fraction() const noexcept { return static_cast<double>(k - k0) / static_cast<double>(k); }
};

/// Throws InvalidArgument unless 1 <= N, 1 <= M and k0 < k.
void validate(const RolloutConfig& cfg);

/// Default burn-in floor(k / 2).
inline std::size_t default_burn_in(std::size_t k) { return k / 2; }

struct RolloutResult {
    Eigen::VectorXd rollout_estimate;
    std::vector<Eigen::VectorXd> per_iteration;  ///< iterations 1..k
    FrozenPath final_path;
};

/// Mean of per_iteration[k0..k-1] (iterations k0+1..k).
Eigen::VectorXd rollout_average(std::span<const Eigen::VectorXd> per_iteration, std::size_t k0);

/// k chained PPG iterations; iteration l draws from rng.split(Phase::Iteration).split(l).
RolloutResult ppg_run(const StateSpaceModel& model, const FrozenPath& init_path, const RolloutConfig& cfg,
                      const AdditiveFunctional& functional, const BackwardSamplerConfig& sampler_cfg,
                      const RngStream& rng);

/// Particle Gibbs with ancestor sampling: the conditional particle's ancestor
/// at each step is drawn from the backward kernel row of zeta_{s+1}, and the
/// returned path traces a uniformly chosen final particle.
FrozenPath pgas_iteration(const StateSpaceModel& model, const FrozenPath& path, std::size_t n, const RngStream& rng,
                          SlotPlacement placement = SlotPlacement::Uniform);

/// Path from a bootstrap filter genealogy, used to seed Gibbs chains.
FrozenPath initial_path(const StateSpaceModel& model, std::size_t horizon, std::size_t n, const RngStream& rng);

}  // namespace smc
