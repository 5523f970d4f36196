#include "smc/reference.hpp"

#include "smc/error.hpp"

namespace smc::reference {

FilterStep pf_step(const StateSpaceModel& model, const ParticleCloud& cloud, const RngStream& rng)
{
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.dim();
    std::vector<std::size_t> ancestors(n);
    Eigen::MatrixXd next(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        RngStream stream = rng.split(i);
        ancestors[i] = cloud.selection().draw(stream);
        model.transition_sample(cloud.time_index(), cloud.particle(ancestors[i]), stream,
                                {next.data() + i * dim, dim});
    }
    return {std::move(ancestors), ParticleCloud(model, cloud.time_index() + 1, std::move(next))};
}

BackwardStats ffbsm_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional)
{
    const std::size_t n_prev = prev_cloud.size();
    const std::size_t n = next_cloud.size();
    const std::size_t d = functional.dim();
    const std::size_t s = prev_cloud.time_index();
    if (prev_stats.rows() != n_prev || prev_stats.dim() != d)
        fail(Errc::DimensionMismatch, "statistics do not match the cloud or the functional");

    Eigen::MatrixXd kernel(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_prev));
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t l = 0; l < n_prev; ++l) {
            const double g = prev_cloud.potentials()[l];
            const double w = g == 0.0 ? 0.0 : g * model.transition_density(s, prev_cloud.particle(l), next_cloud.particle(i));
            kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = w;
            total += w;
        }
        if (!(total > 0.0)) fail(Errc::ZeroBackwardMass, "FFBSm row has zero mass");
        for (std::size_t l = 0; l < n_prev; ++l) kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) /= total;
    }

    BackwardStats out = BackwardStats::zeros(n, d, prev_stats.time_index + 1);
    std::vector<double> term(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n_prev; ++l) {
            const double w = kernel(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l));
            if (w == 0.0) continue;
            functional.term(s, prev_cloud.particle(l), next_cloud.particle(i), term);
            for (std::size_t c = 0; c < d; ++c)
                out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
                    w * (prev_stats.values(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(c)) + term[c]);
        }
    }
    return out;
}

BackwardStats paris_step(const StateSpaceModel& model, const ParticleCloud& prev_cloud,
                         const BackwardStats& prev_stats, const ParticleCloud& next_cloud,
                         const AdditiveFunctional& functional, std::size_t m, const BackwardSamplerConfig& cfg,
                         const RngStream& rng)
{
    const std::size_t n = next_cloud.size();
    const std::size_t d = functional.dim();
    const std::size_t s = prev_cloud.time_index();
    BackwardStats out = BackwardStats::zeros(n, d, prev_stats.time_index + 1);
    std::vector<double> term(d);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream stream = rng.split(i);
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t idx = backward_draw(model, prev_cloud, next_cloud.particle(i), cfg, stream);
            functional.term(s, prev_cloud.particle(idx), next_cloud.particle(i), term);
            for (std::size_t c = 0; c < d; ++c)
                out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) +=
                    prev_stats.values(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(c)) + term[c];
        }
        for (std::size_t c = 0; c < d; ++c)
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) *= 1.0 / static_cast<double>(m);
    }
    return out;
}

}  // namespace smc::reference
