#include "smc/smoothing.hpp"

#include "smc/error.hpp"
#include "smc/filter.hpp"
#include "smc/parallel.hpp"

namespace smc {

namespace {

void check_shapes(const ParticleCloud& prev_cloud, const BackwardStats& prev_stats,
                  const AdditiveFunctional& functional)
{
    if (prev_stats.rows() != prev_cloud.size() || prev_stats.dim() != functional.dim())
        fail(Errc::DimensionMismatch, "statistics do not match the cloud or the functional");
}

}  // namespace

BackwardStats ffbsm_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional)
{
    check_shapes(prev_cloud, prev_stats, functional);
    const std::size_t n_prev = prev_cloud.size();
    const std::size_t n = next_cloud.size();
    const std::size_t d = functional.dim();
    const std::size_t s = prev_cloud.time_index();
    const auto g = prev_cloud.potentials();

    BackwardStats out = BackwardStats::zeros(n, d, prev_stats.time_index + 1);
    parallel_for(
        n,
        [&](std::size_t i) {
            thread_local std::vector<double> weights, term;
            weights.resize(n_prev);
            term.resize(d);
            const State x_next = next_cloud.particle(i);
            double total = 0.0;
            for (std::size_t l = 0; l < n_prev; ++l) {
                weights[l] = g[l] == 0.0 ? 0.0 : g[l] * model.transition_density(s, prev_cloud.particle(l), x_next);
                total += weights[l];
            }
            if (!(total > 0.0)) fail(Errc::ZeroBackwardMass, "FFBSm row has zero mass");
            double* row = out.values.data() + i * d;
            for (std::size_t l = 0; l < n_prev; ++l) {
                if (weights[l] == 0.0) continue;
                const double w = weights[l] / total;
                functional.term(s, prev_cloud.particle(l), x_next, term);
                const double* prev_row = prev_stats.values.data() + l * d;
                for (std::size_t c = 0; c < d; ++c) row[c] += w * (prev_row[c] + term[c]);
            }
        },
        8);
    return out;
}

BackwardStats paris_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional, std::size_t m, const BackwardSamplerConfig& cfg,
                         const RngStream& rng, std::vector<std::size_t>* first_index)
{
    check_shapes(prev_cloud, prev_stats, functional);
    if (m < 1) fail(Errc::InvalidArgument, "PaRIS needs M >= 1");
    const std::size_t n = next_cloud.size();
    const std::size_t d = functional.dim();
    const std::size_t s = prev_cloud.time_index();
    const double inv_m = 1.0 / static_cast<double>(m);
    if (first_index) first_index->assign(n, 0);

    BackwardStats out = BackwardStats::zeros(n, d, prev_stats.time_index + 1);
    parallel_for(n, [&](std::size_t i) {
        thread_local std::vector<double> term;
        term.resize(d);
        RngStream stream = rng.split(i);
        const State x_next = next_cloud.particle(i);
        double* row = out.values.data() + i * d;
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t idx = backward_draw(model, prev_cloud, x_next, cfg, stream);
            if (j == 0 && first_index) (*first_index)[i] = idx;
            functional.term(s, prev_cloud.particle(idx), x_next, term);
            const double* prev_row = prev_stats.values.data() + idx * d;
            for (std::size_t c = 0; c < d; ++c) row[c] += prev_row[c] + term[c];
        }
        for (std::size_t c = 0; c < d; ++c) row[c] *= inv_m;
    });
    return out;
}

SmoothingResult paris_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n, std::size_t m,
                          const AdditiveFunctional& functional, const BackwardSamplerConfig& cfg,
                          const RngStream& rng)
{
    if (horizon < 1) fail(Errc::InvalidArgument, "horizon must be at least 1");
    validate(cfg, model);
    ParticleCloud cloud = pf_init(model, n, rng.split(Phase::Init));
    BackwardStats stats = BackwardStats::zeros(n, functional.dim());
    const RngStream filter = rng.split(Phase::Filter);
    const RngStream backward = rng.split(Phase::Backward);
    for (std::size_t s = 0; s < horizon; ++s) {
        FilterStep step = pf_step(model, cloud, filter.split(s));
        stats = paris_step(model, cloud, stats, step.next, functional, m, cfg, backward.split(s));
        cloud = std::move(step.next);
    }
    Eigen::VectorXd estimate = stats.mean();
    return {std::move(estimate), std::move(cloud), std::move(stats)};
}

SmoothingResult ffbsm_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n,
                          const AdditiveFunctional& functional, const RngStream& rng)
{
    if (horizon < 1) fail(Errc::InvalidArgument, "horizon must be at least 1");
    ParticleCloud cloud = pf_init(model, n, rng.split(Phase::Init));
    BackwardStats stats = BackwardStats::zeros(n, functional.dim());
    const RngStream filter = rng.split(Phase::Filter);
    for (std::size_t s = 0; s < horizon; ++s) {
        FilterStep step = pf_step(model, cloud, filter.split(s));
        stats = ffbsm_step(model, cloud, stats, step.next, functional);
        cloud = std::move(step.next);
    }
    Eigen::VectorXd estimate = stats.mean();
    return {std::move(estimate), std::move(cloud), std::move(stats)};
}

}  // namespace smc
