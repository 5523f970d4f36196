#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "smc/model.hpp"
#include "smc/rng.hpp"

namespace smc::models {

/// X_{m+1} = A X_m + Q eps_{m+1},  Y_m = B X_m + R zeta_m,  X_0 ~ N(init_mean, init_cov).
/// Q and R are noise loadings; the covariances are Q Q^T and R R^T.
struct LgssmParams {
    Eigen::MatrixXd A;
    Eigen::MatrixXd Q;
    Eigen::MatrixXd B;
    Eigen::MatrixXd R;
    Eigen::VectorXd init_mean;
    Eigen::MatrixXd init_cov;

    std::size_t state_dim() const { return static_cast<std::size_t>(A.rows()); }
    std::size_t obs_dim() const { return static_cast<std::size_t>(B.rows()); }
    Eigen::MatrixXd state_cov() const { return Q * Q.transpose(); }
    Eigen::MatrixXd obs_cov() const { return R * R.transpose(); }

    /// Scalar model with X_0 ~ N(0, 1).
    static LgssmParams scalar(double a, double q, double b, double r);
    /// The benchmark configuration (A, Q, B, R) = (0.97, 0.60, 0.54, 0.33).
    static LgssmParams benchmark() { return scalar(0.97, 0.60, 0.54, 0.33); }

    /// Checks dimensions; DimensionMismatch on failure.
    void validate_shapes() const;
};

struct LgssmTrajectory {
    Eigen::MatrixXd states;        ///< dx x T
    Eigen::MatrixXd observations;  ///< dy x T
};

/// T consecutive states and observations X_0..X_{T-1}, Y_0..Y_{T-1}.
LgssmTrajectory lgssm_simulate(const LgssmParams& params, std::size_t length, const RngStream& rng);

/// Gaussian log-density evaluator with a precomputed Cholesky factor.
class GaussianKernel {
public:
    GaussianKernel() = default;
    /// Throws SingularCovariance unless `cov` is positive definite.
    explicit GaussianKernel(const Eigen::MatrixXd& cov);

    /// log N(residual; 0, cov); residual has length dim().
    double log_density(const double* residual) const noexcept;
    double log_normalizer() const noexcept { return log_normalizer_; }
    const Eigen::MatrixXd& chol_inv() const noexcept { return chol_inv_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(chol_inv_.rows()); }

private:
    Eigen::MatrixXd chol_inv_;  ///< L^{-1} with cov = L L^T (lower triangular)
    double log_normalizer_ = 0.0;
};

class LgssmModel final : public StateSpaceModel {
public:
    /// Observations are dy x T; potentials at times >= T equal one.
    /// Throws SingularCovariance when Q Q^T or R R^T is singular.
    LgssmModel(LgssmParams params, Eigen::MatrixXd observations);

    std::size_t state_dim() const override { return params_.state_dim(); }
    void init_sample(RngStream& rng, StateOut out) const override;
    void transition_sample(std::size_t s, State x, RngStream& rng, StateOut out) const override;
    double transition_density(std::size_t s, State x, State x_next) const override;
    std::optional<double> transition_density_upper(std::size_t s) const override;
    double potential(std::size_t s, State x) const override;
    double log_potential(std::size_t s, State x) const override;

    double log_transition_density(State x, State x_next) const noexcept;
    const LgssmParams& params() const noexcept { return params_; }
    const Eigen::MatrixXd& observations() const noexcept { return observations_; }
    std::size_t num_observations() const noexcept { return static_cast<std::size_t>(observations_.cols()); }

private:
    LgssmParams params_;
    Eigen::MatrixXd observations_;
    GaussianKernel transition_;
    GaussianKernel emission_;
    Eigen::MatrixXd init_chol_;
    double upper_ = 0.0;

    // Cached coefficients for the 1-dim case, which dominates the benchmarks.
    struct Scalar {
        double a, q, trans_ci, trans_norm, b, em_ci, em_norm;
    };
    std::optional<Scalar> scalar_;
};

}  // namespace smc::models
