#include "smc/mixing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc {

double rho_bound(std::span<const Bounds> potential_bounds, std::span<const Bounds> density_bounds, std::size_t t)
{
    if (potential_bounds.size() <= t || density_bounds.size() <= t)
        fail(Errc::InvalidArgument, fmt::format("need bounds for times 0..{}", t));
    double rho = 0.0;
    for (std::size_t m = 0; m <= t; ++m) {
        const Bounds g = potential_bounds[m];
        const Bounds q = density_bounds[m];
        if (!(g.min > 0.0) || !(q.min > 0.0) || g.max < g.min || q.max < q.min)
            fail(Errc::NonpositiveBound, fmt::format("invalid bounds at time {}", m));
        rho = std::max(rho, (g.max * q.max) / (g.min * q.min));
    }
    return rho;
}

MixingDiagnostics kappa_rate(double rho, std::size_t n, std::size_t t)
{
    if (!(rho >= 1.0)) fail(Errc::InvalidArgument, fmt::format("rho must be >= 1, got {}", rho));
    if (n < 1 || t < 1) fail(Errc::InvalidArgument, "N and t must be positive");
    const double r2 = rho * rho;
    const double nn = static_cast<double>(n);
    const double tt = static_cast<double>(t);
    const double threshold = std::max(1.0 + 2.5 * r2, 2.0 * tt * (1.0 + r2));
    const double kappa = 1.0 - (1.0 - (1.0 + 2.5 * tt * r2) / nn) / (1.0 + 4.0 * tt * (1.0 + 2.0 * r2) / nn);
    const auto n_min = static_cast<std::size_t>(std::ceil(threshold));
    return {rho, kappa, n_min, threshold, n <= n_min};
}

MixingDiagnostics kappa_rate_checked(double rho, std::size_t n, std::size_t t)
{
    MixingDiagnostics d = kappa_rate(rho, n, t);
    if (d.below_threshold)
        fail(Errc::BelowParticleThreshold, fmt::format("N={} does not exceed n_min={} (N_t={})", n, d.n_min, d.threshold));
    return d;
}

}  // namespace smc
