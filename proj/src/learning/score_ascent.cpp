#include "smc/learning/score_ascent.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::learning {

GdEstimate gd_est(const ParametricFamily& family, const Eigen::VectorXd& theta, const FrozenPath& path,
                  const RolloutConfig& rollout, const BackwardSamplerConfig& sampler, const RngStream& rng)
{
    const auto model = family.make_model(theta);
    const auto functional = fisher_functional(family, theta);
    RolloutResult r = ppg_run(*model, path, rollout, *functional, sampler, rng);
    std::vector<Eigen::VectorXd> retained(r.per_iteration.begin() + static_cast<std::ptrdiff_t>(rollout.k0),
                                          r.per_iteration.end());
    return {std::move(r.rollout_estimate), std::move(retained), std::move(r.final_path)};
}

Eigen::VectorXd initial_theta(std::size_t dim, const RngStream& rng, double sd)
{
    RngStream stream = rng;
    Eigen::VectorXd theta(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = sd * stream.normal();
    return theta;
}

void validate(const ScoreAscentConfig& cfg, const ParametricFamily& family)
{
    validate(cfg.rollout);
    if (family.num_observations() < 1) fail(Errc::InvalidArgument, "learning needs at least one observation");
    if (family.requires_hybrid_sampler() && cfg.sampler.kind != BackwardSamplerKind::Hybrid)
        fail(Errc::ConfigError, "this model family requires the hybrid backward sampler");
    if (!(cfg.adam.learning_rate > 0.0)) fail(Errc::ConfigError, "learning rate must be positive");
}

nlohmann::json config_snapshot(const ScoreAscentConfig& cfg, const char* kernel)
{
    const char* sampler = cfg.sampler.kind == BackwardSamplerKind::Exact          ? "exact"
                          : cfg.sampler.kind == BackwardSamplerKind::AcceptReject ? "accept_reject"
                                                                                   : "hybrid";
    return {
        {"kernel", kernel},
        {"iterations", cfg.iterations},
        {"N", cfg.rollout.n},
        {"M", cfg.rollout.m},
        {"k", cfg.rollout.k},
        {"k0", cfg.rollout.k0},
        {"budget", cfg.rollout.budget()},
        {"sampler", sampler},
        {"max_trials", cfg.sampler.max_trials},
        {"path_mode", cfg.path_mode == PathMode::WarmStart ? "warm" : "cold"},
        {"gradient_rescaling", cfg.rescale_by_horizon ? "divide_by_T" : "none"},
        {"adam",
         {{"learning_rate", cfg.adam.learning_rate},
          {"beta1", cfg.adam.beta1},
          {"beta2", cfg.adam.beta2},
          {"epsilon", cfg.adam.epsilon},
          {"decay", cfg.adam.sqrt_decay ? "gamma1/sqrt(step)" : "none"}}},
        {"d_mle", "euclidean distance between sorted singular values of (A, B), concatenated"},
    };
}

namespace {

using Clock = std::chrono::steady_clock;

LearningRow make_row(std::size_t iteration, const Eigen::VectorXd& theta, const Eigen::VectorXd& gradient,
                     const LearningOracles& oracles, Clock::time_point start)
{
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    LearningRow row;
    row.iteration = iteration;
    row.theta = theta;
    row.gradient = gradient;
    row.grad_norm = gradient.size() > 0 ? gradient.norm() : nan;
    row.exact_score_norm = oracles.exact_score_norm ? oracles.exact_score_norm(theta) : nan;
    row.d_mle = oracles.d_mle ? oracles.d_mle(theta) : nan;
    row.nll = oracles.nll ? oracles.nll(theta) : nan;
    row.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return row;
}

// Shared outer loop; `estimate` returns the raw gradient and updates the path.
template <class Estimate>
LearningRun ascend(const ParametricFamily& family, const Eigen::VectorXd& theta0, const ScoreAscentConfig& cfg,
                   const RngStream& rng, const LearningOracles& oracles, const char* kernel, Estimate&& estimate)
{
    validate(cfg, family);
    if (static_cast<std::size_t>(theta0.size()) != family.param_dim())
        fail(Errc::DimensionMismatch, "theta0 does not match the family's parameter count");
    const auto start = Clock::now();
    const std::size_t horizon = family.num_observations();
    const double scale = cfg.rescale_by_horizon ? 1.0 / static_cast<double>(horizon) : 1.0;

    LearningRun run;
    run.param_names = family.param_names();
    run.seed = rng.seed();
    run.config = config_snapshot(cfg, kernel);
    run.rows.push_back(make_row(0, theta0, Eigen::VectorXd(), oracles, start));

    Eigen::VectorXd theta = theta0;
    AdamState adam = AdamState::fresh(family.param_dim(), cfg.adam);
    const RngStream init_streams = rng.split(Phase::Init);
    const RngStream outer_streams = rng.split(Phase::Learning);
    FrozenPath path;
    for (std::size_t i = 1; i <= cfg.iterations; ++i) {
        const auto model = family.make_model(theta);
        if (i == 1 || cfg.path_mode == PathMode::ColdStart)
            path = initial_path(*model, horizon, cfg.rollout.n, init_streams.split(i));
        if (path.dim() != model->state_dim() || path.horizon() != horizon)
            fail(Errc::DimensionMismatch, fmt::format("conditioning path invalid at outer step {}", i));

        Eigen::VectorXd gradient = estimate(*model, theta, path, outer_streams.split(i)) * scale;
        if (!gradient.allFinite())
            fail(Errc::NonFiniteGradient,
                 fmt::format("non-finite gradient at outer step {} (theta norm {:.6g})", i, theta.norm()));
        adam_step(adam, theta, gradient);
        run.rows.push_back(make_row(i, theta, gradient, oracles, start));
    }
    return run;
}

}  // namespace

LearningRun score_ascent_ppg(const ParametricFamily& family, const Eigen::VectorXd& theta0,
                             const ScoreAscentConfig& cfg, const RngStream& rng, const LearningOracles& oracles)
{
    return ascend(family, theta0, cfg, rng, oracles, "ppg",
                  [&](const StateSpaceModel& model, const Eigen::VectorXd& theta, FrozenPath& path,
                      const RngStream& stream) {
                      validate(cfg.sampler, model);
                      const auto functional = fisher_functional(family, theta);
                      RolloutResult r = ppg_run(model, path, cfg.rollout, *functional, cfg.sampler, stream);
                      path = std::move(r.final_path);
                      return Eigen::VectorXd(r.rollout_estimate);
                  });
}

LearningRun score_ascent_pg(const ParametricFamily& family, const Eigen::VectorXd& theta0,
                            const ScoreAscentConfig& cfg, const RngStream& rng, const LearningOracles& oracles)
{
    return ascend(family, theta0, cfg, rng, oracles, "pgas",
                  [&](const StateSpaceModel& model, const Eigen::VectorXd& theta, FrozenPath& path,
                      const RngStream& stream) {
                      const auto functional = fisher_functional(family, theta);
                      const RngStream moves = stream.split(Phase::Iteration);
                      Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(functional->dim()));
                      for (std::size_t l = 1; l <= cfg.rollout.k; ++l) {
                          path = pgas_iteration(model, path, cfg.rollout.n, moves.split(l));
                          if (l > cfg.rollout.k0) acc += functional->evaluate_path(path.states);
                      }
                      return Eigen::VectorXd(acc / static_cast<double>(cfg.rollout.k - cfg.rollout.k0));
                  });
}

}  // namespace smc::learning
