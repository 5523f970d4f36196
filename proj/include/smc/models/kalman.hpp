#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smc/models/lgssm.hpp"

namespace smc::models {

struct KalmanResult {
    std::vector<Eigen::VectorXd> predicted_means;  ///< E[x_s | y_{0:s-1}]
    std::vector<Eigen::MatrixXd> predicted_covs;
    std::vector<Eigen::VectorXd> filtered_means;   ///< E[x_s | y_{0:min(s, T-1)}]
    std::vector<Eigen::MatrixXd> filtered_covs;
    double loglik = 0.0;                           ///< log p(y_{0:T-1})
};

/// Kalman filter over states x_0..x_{n-1}, n = max(n_states, T). States past
/// the last observation are pure predictions. Throws SingularInnovation.
KalmanResult kalman_filter(const LgssmParams& params, const Eigen::MatrixXd& observations, std::size_t n_states = 0);

/// Exact smoothing moments of x_{0:H} given all observations.
struct SmoothedMoments {
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    std::vector<Eigen::MatrixXd> lag_covs;  ///< lag_covs[s] = Cov(x_s, x_{s+1} | y)
    double loglik = 0.0;

    std::size_t horizon() const noexcept { return means.size() - 1; }
    /// E[x_s x_s^T | y]
    Eigen::MatrixXd second_moment(std::size_t s) const;
    /// E[x_s x_{s+1}^T | y]
    Eigen::MatrixXd lag_one_moment(std::size_t s) const;
    /// sum_{s=0}^{H-1} E[x_s x_{s+1}^T | y]
    Eigen::MatrixXd lag_one_sum() const;
};

/// RTS smoother with the lag-one covariance recursion. The horizon H defaults
/// to T - 1 (the last observed state); a larger H appends predicted states.
SmoothedMoments disturbance_smooth(const LgssmParams& params, const Eigen::MatrixXd& observations,
                                   std::optional<std::size_t> horizon = std::nullopt);

/// Gradient of log p(y_{0:T-1}) with respect to A and B, Q and R fixed.
struct LgssmScore {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;

    /// vec(A) then vec(B), column-major.
    Eigen::VectorXd flatten() const;
};

LgssmScore lgssm_exact_score(const LgssmParams& params, const Eigen::MatrixXd& observations);

struct EmResult {
    LgssmParams params;
    std::vector<double> logliks;  ///< log-likelihood before each iteration and after the last
    std::size_t iterations = 0;
};

/// Exact EM on (A, B). Stops after `iters` iterations or once the largest
/// parameter change falls below `tol`.
EmResult lgssm_exact_mle(const LgssmParams& params0, const Eigen::MatrixXd& observations, std::size_t iters,
                         double tol = 0.0);

}  // namespace smc::models
