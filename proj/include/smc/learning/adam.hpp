#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace smc::learning {

struct AdamConfig {
    double learning_rate = 0.2;  ///< gamma_1
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    bool sqrt_decay = true;      ///< rate gamma_1 / sqrt(step)
};

struct AdamState {
    AdamConfig config;
    std::size_t step = 0;
    Eigen::VectorXd m;
    Eigen::VectorXd v;

    static AdamState fresh(std::size_t dim, const AdamConfig& config = {});
    double current_rate() const;
};

/// One bias-corrected Adam step in the ascent direction: theta += rate * m_hat / (sqrt(v_hat) + eps).
/// Throws NonFiniteGradient (leaving state and theta untouched) or DimensionMismatch.
void adam_step(AdamState& state, Eigen::VectorXd& theta, const Eigen::VectorXd& gradient);

}  // namespace smc::learning
