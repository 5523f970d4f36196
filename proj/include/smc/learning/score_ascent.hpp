#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Core>

#include "smc/backward.hpp"
#include "smc/learning/adam.hpp"
#include "smc/learning/family.hpp"
#include "smc/learning/learning_run.hpp"
#include "smc/ppg.hpp"
#include "smc/rng.hpp"

namespace smc::learning {

struct GdEstimate {
    Eigen::VectorXd gradient;                ///< roll-out average, not rescaled
    std::vector<Eigen::VectorXd> retained;   ///< per-iteration estimates k0+1..k
    FrozenPath final_path;
};

/// Roll-out PPG estimate of the score at theta, conditioned on `path`.
GdEstimate gd_est(const ParametricFamily& family, const Eigen::VectorXd& theta, const FrozenPath& path,
                  const RolloutConfig& rollout, const BackwardSamplerConfig& sampler, const RngStream& rng);

enum class PathMode {
    WarmStart,  ///< the last conditioning path is passed to the next outer step
    ColdStart,  ///< a fresh filter-genealogy path at every outer step
};

struct ScoreAscentConfig {
    std::size_t iterations = 100;  ///< outer steps n
    RolloutConfig rollout;         ///< N, M, k, k0 (M unused by the PGAS driver)
    BackwardSamplerConfig sampler;
    AdamConfig adam;
    PathMode path_mode = PathMode::WarmStart;
    bool rescale_by_horizon = true;  ///< divide gradients by T before the optimizer
};

/// Optional per-row diagnostics evaluated on theta.
struct LearningOracles {
    std::function<double(const Eigen::VectorXd&)> d_mle;
    std::function<double(const Eigen::VectorXd&)> exact_score_norm;
    std::function<double(const Eigen::VectorXd&)> nll;
};

/// theta_0 ~ N(0, sd^2 I).
Eigen::VectorXd initial_theta(std::size_t dim, const RngStream& rng, double sd = 0.1);

/// Throws ConfigError / InvalidArgument / MissingDensityUpperBound for invalid settings.
void validate(const ScoreAscentConfig& cfg, const ParametricFamily& family);

nlohmann::json config_snapshot(const ScoreAscentConfig& cfg, const char* kernel);

/// Score ascent with roll-out PPG gradients. Outer step i draws from
/// rng.split(Phase::Learning).split(i).
LearningRun score_ascent_ppg(const ParametricFamily& family, const Eigen::VectorXd& theta0,
                             const ScoreAscentConfig& cfg, const RngStream& rng, const LearningOracles& oracles = {});

/// Score ascent where each outer step runs k PGAS moves and averages the
/// score functional over the paths of moves k0+1..k.
LearningRun score_ascent_pg(const ParametricFamily& family, const Eigen::VectorXd& theta0,
                            const ScoreAscentConfig& cfg, const RngStream& rng, const LearningOracles& oracles = {});

}  // namespace smc::learning
