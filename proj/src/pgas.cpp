#include "smc/error.hpp"
#include "smc/ppg.hpp"

namespace smc {

FrozenPath pgas_iteration(const StateSpaceModel& model, const FrozenPath& path, std::size_t n, const RngStream& rng,
                          SlotPlacement placement)
{
    if (path.states.cols() < 2) fail(Errc::InvalidArgument, "a conditioning path needs at least two states");
    if (path.dim() != model.state_dim()) fail(Errc::DimensionMismatch, "conditioning path has the wrong dimension");
    const std::size_t horizon = path.horizon();

    FilterTrajectory run;
    run.clouds.reserve(horizon + 1);
    run.clouds.push_back(cpf_init(model, n, path.state(0), rng.split(Phase::Init), placement).cloud);
    const RngStream filter = rng.split(Phase::Filter);
    const RngStream ancestry = rng.split(Phase::AncestorSampling);
    const BackwardSamplerConfig exact{BackwardSamplerKind::Exact, 0};
    for (std::size_t s = 0; s < horizon; ++s) {
        const ParticleCloud& cloud = run.clouds.back();
        ConditionalStep step = cpf_step(model, cloud, path.state(s + 1), filter.split(s), placement);
        // Ancestor of the pinned particle ~ g_s(xi_s^l) m_s(xi_s^l, zeta_{s+1}).
        RngStream stream = ancestry.split(s);
        step.ancestors[step.slot] = backward_draw(model, cloud, path.state(s + 1), exact, stream);
        run.ancestors.push_back(std::move(step.ancestors));
        run.clouds.push_back(std::move(step.next));
    }
    RngStream pick = rng.split(Phase::PathSelect);
    return {trace_genealogy(run, pick.below(n))};
}

}  // namespace smc
