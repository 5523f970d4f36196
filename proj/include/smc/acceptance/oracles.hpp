#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "smc/models/discrete_hmm.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/rng.hpp"

// Brute-force reference computations used by the tests and acceptance checks.
// They share no code with the recursive oracles they are compared against.
namespace smc::oracle {

/// Moments of x_{0:H} given y_{0:T-1}, by conditioning the full joint Gaussian.
struct DenseGaussianSmoothing {
    std::vector<Eigen::VectorXd> means;
    std::vector<Eigen::MatrixXd> covs;
    std::vector<Eigen::MatrixXd> lag_covs;  ///< Cov(x_s, x_{s+1} | y)
    double loglik = 0.0;                    ///< log N(y; E y, Cov y)
};

DenseGaussianSmoothing dense_lgssm_smoothing(const models::LgssmParams& params, const Eigen::MatrixXd& observations,
                                             std::size_t horizon);

/// Exact joint smoothing law of a discrete HMM by enumerating all K^{T+1}
/// paths. Only for tiny problems.
models::DiscreteSmoothing enumerate_hmm_paths(const models::DiscreteHmm& hmm, std::size_t horizon);

/// One path from the exact joint smoothing law (forward filtering, backward
/// sampling), as a 1 x (T+1) matrix of state indices.
Eigen::MatrixXd sample_hmm_smoothing_path(const models::DiscreteHmm& hmm, std::size_t horizon, RngStream& rng);

}  // namespace smc::oracle
