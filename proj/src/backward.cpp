#include "smc/backward.hpp"

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc {

namespace {

// Pure accept-reject re-checks that the row has mass this often.
constexpr std::size_t kMassCheckInterval = std::size_t{1} << 20;

double unnormalized_row(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next,
                        std::vector<double>& weights)
{
    const std::size_t n = prev_cloud.size();
    const auto g = prev_cloud.potentials();
    weights.resize(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        weights[j] = g[j] == 0.0 ? 0.0
                                 : g[j] * model.transition_density(prev_cloud.time_index(), prev_cloud.particle(j), x_next);
        total += weights[j];
    }
    return total;
}

[[noreturn]] void zero_mass(const ParticleCloud& prev_cloud)
{
    fail(Errc::ZeroBackwardMass,
         fmt::format("backward kernel row has zero mass at time {}", prev_cloud.time_index()));
}

std::size_t draw_exact(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next, RngStream& rng)
{
    thread_local std::vector<double> weights;
    const double total = unnormalized_row(model, prev_cloud, x_next, weights);
    if (!(total > 0.0)) zero_mass(prev_cloud);
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] <= 0.0) continue;
        acc += weights[j];
        last_positive = j;
        if (target < acc) return j;
    }
    return last_positive;
}

}  // namespace

void validate(const BackwardSamplerConfig& cfg, const StateSpaceModel& model)
{
    if (cfg.kind == BackwardSamplerKind::Exact) return;
    // Models either provide bounds at every time or at none, so time 0 decides.
    if (!model.transition_density_upper(0))
        fail(Errc::MissingDensityUpperBound, "accept-reject backward sampling needs a transition density bound");
}

std::vector<double> backward_row_probs(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next)
{
    std::vector<double> weights;
    const double total = unnormalized_row(model, prev_cloud, x_next, weights);
    if (!(total > 0.0)) zero_mass(prev_cloud);
    for (double& w : weights) w /= total;
    return weights;
}

BackwardDrawInfo backward_draw_info(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next,
                                    const BackwardSamplerConfig& cfg, RngStream& rng)
{
    const std::size_t n = prev_cloud.size();
    if (n == 1) {
        // The single candidate still needs positive backward mass.
        if (!(prev_cloud.potentials()[0] *
                  model.transition_density(prev_cloud.time_index(), prev_cloud.particle(0), x_next) >
              0.0))
            zero_mass(prev_cloud);
        return {0, 0, false};
    }
    if (cfg.kind == BackwardSamplerKind::Exact) return {draw_exact(model, prev_cloud, x_next, rng), 0, false};

    const auto bound = model.transition_density_upper(prev_cloud.time_index());
    if (!bound) fail(Errc::MissingDensityUpperBound, "accept-reject backward sampling needs a transition density bound");
    const double inv_bound = 1.0 / *bound;

    const bool hybrid = cfg.kind == BackwardSamplerKind::Hybrid;
    const std::size_t cutoff = cfg.max_trials > 0 ? cfg.max_trials : n;
    std::size_t trials = 0;
    for (;;) {
        const std::size_t j = prev_cloud.selection().draw(rng);
        ++trials;
        const double accept =
            model.transition_density(prev_cloud.time_index(), prev_cloud.particle(j), x_next) * inv_bound;
        if (rng.uniform() < accept) return {j, trials, false};
        if (hybrid && trials >= cutoff) return {draw_exact(model, prev_cloud, x_next, rng), trials, true};
        if (!hybrid && trials % kMassCheckInterval == 0) {
            std::vector<double> weights;
            if (!(unnormalized_row(model, prev_cloud, x_next, weights) > 0.0)) zero_mass(prev_cloud);
        }
    }
}

std::size_t backward_draw(const StateSpaceModel& model, const ParticleCloud& prev_cloud, State x_next,
                          const BackwardSamplerConfig& cfg, RngStream& rng)
{
    return backward_draw_info(model, prev_cloud, x_next, cfg, rng).index;
}

}  // namespace smc
