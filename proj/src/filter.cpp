#include "smc/filter.hpp"

#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"
#include "smc/parallel.hpp"

namespace smc {

ParticleCloud pf_init(const StateSpaceModel& model, std::size_t n, const RngStream& rng)
{
    if (n < 1) fail(Errc::InvalidArgument, "pf_init needs N >= 1");
    const std::size_t dim = model.state_dim();
    Eigen::MatrixXd particles(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        RngStream stream = rng.split(i);
        model.init_sample(stream, {particles.data() + i * dim, dim});
    });
    return ParticleCloud(model, 0, std::move(particles));
}

FilterStep pf_step(const StateSpaceModel& model, const ParticleCloud& cloud, const RngStream& rng)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dim();
    std::vector<std::size_t> ancestors(n);
    Eigen::MatrixXd next(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        RngStream stream = rng.split(i);
        const std::size_t a = cloud.selection().draw(stream);
        ancestors[i] = a;
        model.transition_sample(cloud.time_index(), cloud.particle(a), stream, {next.data() + i * dim, dim});
    });
    return {std::move(ancestors), ParticleCloud(model, cloud.time_index() + 1, std::move(next))};
}

BackwardStats genealogy_update(const BackwardStats& prev_stats, std::span<const std::size_t> ancestors,
                               const AdditiveFunctional& functional, const ParticleCloud& prev_cloud,
                               const ParticleCloud& next_cloud)
{
    const std::size_t n = next_cloud.size();
    const std::size_t d = functional.dim();
    if (ancestors.size() != n || prev_stats.rows() != prev_cloud.size() || prev_stats.dim() != d)
        fail(Errc::DimensionMismatch, "genealogy_update: inconsistent shapes");

    BackwardStats out = BackwardStats::zeros(n, d, prev_stats.time_index + 1);
    std::vector<double> term(d);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = ancestors[i];
        if (a >= prev_cloud.size()) fail(Errc::DimensionMismatch, "genealogy_update: ancestor out of range");
        functional.term(prev_cloud.time_index(), prev_cloud.particle(a), next_cloud.particle(i), term);
        for (std::size_t c = 0; c < d; ++c)
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                prev_stats.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) + term[c];
    }
    return out;
}

double log_mean_potential(const StateSpaceModel& model, const ParticleCloud& cloud)
{
    const auto g = cloud.potentials();
    const double n = static_cast<double>(g.size());
    bool tiny = false;
    for (double w : g) tiny = tiny || w < 1e-300;
    if (!tiny) return std::log(cloud.potential_sum() / n);

    std::vector<double> logs(g.size());
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
        logs[i] = model.log_potential(cloud.time_index(), cloud.particle(i));
        peak = std::max(peak, logs[i]);
    }
    if (!std::isfinite(peak)) return -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double l : logs) acc += std::exp(l - peak);
    return peak + std::log(acc / n);
}

LogLikelihoodEstimate pf_loglik(const StateSpaceModel& model, std::size_t horizon, std::size_t n,
                                const RngStream& rng)
{
    try {
        ParticleCloud cloud = pf_init(model, n, rng.split(Phase::Init));
        double total = log_mean_potential(model, cloud);
        const RngStream filter = rng.split(Phase::Filter);
        for (std::size_t s = 0; s < horizon; ++s) {
            cloud = pf_step(model, cloud, filter.split(s)).next;
            total += log_mean_potential(model, cloud);
        }
        return {total, false};
    } catch (const Error& e) {
        if (e.code() != Errc::AllWeightsZero) throw;
        return {-std::numeric_limits<double>::infinity(), true};
    }
}

FilterTrajectory pf_run(const StateSpaceModel& model, std::size_t horizon, std::size_t n, const RngStream& rng)
{
    FilterTrajectory run;
    run.clouds.reserve(horizon + 1);
    run.clouds.push_back(pf_init(model, n, rng.split(Phase::Init)));
    const RngStream filter = rng.split(Phase::Filter);
    for (std::size_t s = 0; s < horizon; ++s) {
        FilterStep step = pf_step(model, run.clouds.back(), filter.split(s));
        run.ancestors.push_back(std::move(step.ancestors));
        run.clouds.push_back(std::move(step.next));
    }
    return run;
}

Eigen::MatrixXd trace_genealogy(const FilterTrajectory& run, std::size_t index)
{
    const std::size_t horizon = run.clouds.size() - 1;
    const std::size_t dim = run.clouds.front().dim();
    Eigen::MatrixXd path(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(horizon + 1));
    std::size_t j = index;
    for (std::size_t s = horizon + 1; s-- > 0;) {
        const State x = run.clouds[s].particle(j);
        for (std::size_t r = 0; r < dim; ++r) path(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = x[r];
        if (s > 0) j = run.ancestors[s - 1][j];
    }
    return path;
}

}  // namespace smc
