#pragma once

#include <cstddef>
#include <span>

namespace smc {

struct Bounds {
    double min;
    double max;
};

/// rho_t = max_{m <= t} (g_max m_max) / (g_min m_min). Throws NonpositiveBound
/// for nonpositive or inverted bounds.
double rho_bound(std::span<const Bounds> potential_bounds, std::span<const Bounds> density_bounds, std::size_t t);

struct MixingDiagnostics {
    double rho_t;
    double kappa;
    std::size_t n_min;      ///< ceil(N_t)
    double threshold;       ///< N_t = (1 + 5 rho^2 / 2) v 2t(1 + rho^2)
    bool below_threshold;   ///< N <= N_t; kappa is then outside its guarantee
};

/// kappa_{N,t} = 1 - [1 - (1 + 5 t rho^2 / 2) / N] / [1 + 4t(1 + 2 rho^2) / N].
MixingDiagnostics kappa_rate(double rho, std::size_t n, std::size_t t);

/// As kappa_rate but throws BelowParticleThreshold when N <= N_t.
MixingDiagnostics kappa_rate_checked(double rho, std::size_t n, std::size_t t);

}  // namespace smc
