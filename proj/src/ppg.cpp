#include "smc/ppg.hpp"

#include <fmt/format.h>

#include "smc/error.hpp"
#include "smc/parallel.hpp"
#include "smc/smoothing.hpp"

namespace smc {

namespace {

std::size_t choose_slot(std::size_t n, const RngStream& rng, SlotPlacement placement)
{
    if (placement == SlotPlacement::First) return 0;
    RngStream stream = rng.split(Phase::Slot);
    return stream.below(n);
}

void copy_state(State from, double* to)
{
    for (std::size_t r = 0; r < from.size(); ++r) to[r] = from[r];
}

}  // namespace

ConditionalCloud cpf_init(const StateSpaceModel& model, std::size_t n, State zeta0, const RngStream& rng,
                          SlotPlacement placement)
{
    if (n < 1) fail(Errc::InvalidArgument, "cpf_init needs N >= 1");
    const std::size_t dim = model.state_dim();
    if (zeta0.size() != dim) fail(Errc::DimensionMismatch, "conditional state has the wrong dimension");
    const std::size_t slot = choose_slot(n, rng, placement);
    Eigen::MatrixXd particles(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        if (i == slot) {
            copy_state(zeta0, particles.data() + i * dim);
            return;
        }
        RngStream stream = rng.split(i);
        model.init_sample(stream, {particles.data() + i * dim, dim});
    });
    return {ParticleCloud(model, 0, std::move(particles)), slot};
}

ConditionalStep cpf_step(const StateSpaceModel& model, const ParticleCloud& cloud, State zeta_next,
                         const RngStream& rng, SlotPlacement placement)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dim();
    if (zeta_next.size() != dim) fail(Errc::DimensionMismatch, "conditional state has the wrong dimension");
    const std::size_t slot = choose_slot(n, rng, placement);
    std::vector<std::size_t> ancestors(n, kNoAncestor);
    Eigen::MatrixXd next(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        if (i == slot) {
            copy_state(zeta_next, next.data() + i * dim);
            return;
        }
        RngStream stream = rng.split(i);
        const std::size_t a = cloud.selection().draw(stream);
        ancestors[i] = a;
        model.transition_sample(cloud.time_index(), cloud.particle(a), stream, {next.data() + i * dim, dim});
    });
    return {std::move(ancestors), ParticleCloud(model, cloud.time_index() + 1, std::move(next)), slot};
}

Eigen::MatrixXd ConditionalParisState::path(std::size_t i) const
{
    const std::size_t t = time_index();
    const std::size_t dim = clouds.front().dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(t + 1));
    std::size_t j = i;
    for (std::size_t s = t + 1; s-- > 0;) {
        copy_state(clouds[s].particle(j), out.data() + s * dim);
        if (s > 0) j = links[s - 1][j];
    }
    return out;
}

ConditionalParisState cond_paris_start(const StateSpaceModel& model, std::size_t n, State zeta0,
                                       std::size_t functional_dim, const RngStream& rng, SlotPlacement placement)
{
    ConditionalCloud init = cpf_init(model, n, zeta0, rng, placement);
    ConditionalParisState state;
    state.clouds.push_back(std::move(init.cloud));
    state.slots.push_back(init.slot);
    state.stats = BackwardStats::zeros(n, functional_dim);
    return state;
}

ConditionalParisState cond_paris_update(const StateSpaceModel& model, ConditionalParisState prev, State zeta_next,
                                        const AdditiveFunctional& functional, std::size_t m,
                                        const BackwardSamplerConfig& cfg, const CondParisStreams& streams,
                                        SlotPlacement placement)
{
    const ParticleCloud& cloud = prev.clouds.back();
    ConditionalStep step = cpf_step(model, cloud, zeta_next, streams.filter, placement);
    std::vector<std::size_t> first_index;
    BackwardStats stats =
        paris_step(model, cloud, prev.stats, step.next, functional, m, cfg, streams.backward, &first_index);
    prev.stats = std::move(stats);
    prev.links.push_back(std::move(first_index));
    prev.slots.push_back(step.slot);
    prev.clouds.push_back(std::move(step.next));
    return prev;
}

PpgIterate ppg_iteration(const StateSpaceModel& model, const FrozenPath& path, std::size_t n, std::size_t m,
                         const AdditiveFunctional& functional, const BackwardSamplerConfig& cfg, const RngStream& rng,
                         SlotPlacement placement)
{
    if (path.states.cols() < 2) fail(Errc::InvalidArgument, "a conditioning path needs at least two states");
    if (path.dim() != model.state_dim()) fail(Errc::DimensionMismatch, "conditioning path has the wrong dimension");
    const std::size_t horizon = path.horizon();

    ConditionalParisState system =
        cond_paris_start(model, n, path.state(0), functional.dim(), rng.split(Phase::Init), placement);
    const RngStream filter = rng.split(Phase::Filter);
    const RngStream backward = rng.split(Phase::Backward);
    for (std::size_t s = 0; s < horizon; ++s)
        system = cond_paris_update(model, std::move(system), path.state(s + 1), functional, m, cfg,
                                   {filter.split(s), backward.split(s)}, placement);

    RngStream select = rng.split(Phase::PathSelect);
    const std::size_t chosen = select.below(n);
    FrozenPath next{system.path(chosen)};
    Eigen::VectorXd estimate = system.stats.mean();
    return {std::move(system), std::move(next), chosen, std::move(estimate)};
}

void validate(const RolloutConfig& cfg)
{
    if (cfg.n < 1 || cfg.m < 1 || cfg.k < 1)
        fail(Errc::InvalidArgument, "roll-out needs N, M and k to be positive");
    if (cfg.k0 >= cfg.k) fail(Errc::InvalidArgument, fmt::format("burn-in k0={} must be below k={}", cfg.k0, cfg.k));
}

Eigen::VectorXd rollout_average(std::span<const Eigen::VectorXd> per_iteration, std::size_t k0)
{
    if (k0 >= per_iteration.size()) fail(Errc::InvalidArgument, "burn-in leaves no iterations to average");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(per_iteration.front().size());
    for (std::size_t l = k0; l < per_iteration.size(); ++l) acc += per_iteration[l];
    return acc / static_cast<double>(per_iteration.size() - k0);
}

RolloutResult ppg_run(const StateSpaceModel& model, const FrozenPath& init_path, const RolloutConfig& cfg,
                      const AdditiveFunctional& functional, const BackwardSamplerConfig& sampler_cfg,
                      const RngStream& rng)
{
    validate(cfg);
    validate(sampler_cfg, model);
    RolloutResult result;
    result.final_path = init_path;
    result.per_iteration.reserve(cfg.k);
    const RngStream iterations = rng.split(Phase::Iteration);
    for (std::size_t l = 1; l <= cfg.k; ++l) {
        PpgIterate it = ppg_iteration(model, result.final_path, cfg.n, cfg.m, functional, sampler_cfg,
                                      iterations.split(l));
        result.per_iteration.push_back(std::move(it.estimate));
        result.final_path = std::move(it.new_path);
    }
    result.rollout_estimate = rollout_average(result.per_iteration, cfg.k0);
    return result;
}

FrozenPath initial_path(const StateSpaceModel& model, std::size_t horizon, std::size_t n, const RngStream& rng)
{
    const FilterTrajectory run = pf_run(model, horizon, n, rng);
    RngStream pick = rng.split(Phase::PathSelect);
    return {trace_genealogy(run, pick.below(n))};
}

}  // namespace smc
