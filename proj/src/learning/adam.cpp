#include "smc/learning/adam.hpp"

#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::learning {

AdamState AdamState::fresh(std::size_t dim, const AdamConfig& config)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return {config, 0, Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

double AdamState::current_rate() const
{
    if (step == 0 || !config.sqrt_decay) return config.learning_rate;
    return config.learning_rate / std::sqrt(static_cast<double>(step));
}

void adam_step(AdamState& state, Eigen::VectorXd& theta, const Eigen::VectorXd& gradient)
{
    if (gradient.size() != theta.size() || state.m.size() != theta.size())
        fail(Errc::DimensionMismatch, "Adam: gradient, moments and parameters differ in size");
    if (!gradient.allFinite())
        fail(Errc::NonFiniteGradient, fmt::format("non-finite gradient at optimizer step {}", state.step + 1));

    const AdamConfig& c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    state.m = c.beta1 * state.m + (1.0 - c.beta1) * gradient;
    state.v = c.beta2 * state.v + (1.0 - c.beta2) * gradient.cwiseAbs2();
    const double bc1 = 1.0 - std::pow(c.beta1, t);
    const double bc2 = 1.0 - std::pow(c.beta2, t);
    const double rate = state.current_rate();
    theta.array() += rate * (state.m.array() / bc1) / ((state.v.array() / bc2).sqrt() + c.epsilon);
}

}  // namespace smc::learning
