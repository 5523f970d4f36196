#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "smc/model.hpp"
#include "smc/rng.hpp"

namespace smc::models {

/// Chaotic recurrent network:
///   X_{m+1} = X_m + (delta / tau) (-X_m + gamma W tanh(X_m)) + eps,  eps ~ N(0, state_noise_var I),
///   Y_m = B X_m + Student-t noise (obs_scale, obs_df) per component.
struct CrnnParams {
    double tau = 1.0;
    double delta = 0.03;
    double gamma = 2.5;
    Eigen::MatrixXd W;
    Eigen::MatrixXd B;
    double state_noise_var = 0.01;
    double obs_scale = 0.1;
    double obs_df = 2.0;
    double init_var = 1.0;  ///< X_0 ~ N(0, init_var I)

    std::size_t state_dim() const { return static_cast<std::size_t>(W.rows()); }
    std::size_t obs_dim() const { return static_cast<std::size_t>(B.rows()); }

    /// W and B with i.i.d. N(0, 1/dim) entries.
    static CrnnParams with_random_weights(std::size_t dim, std::size_t obs_dim, const RngStream& rng);

    /// Throws InvalidArgument / DimensionMismatch on invalid values.
    void validate() const;

    /// x + (delta / tau) (-x + gamma W tanh(x))
    void transition_mean(State x, std::span<double> out) const;
};

struct CrnnTrajectory {
    Eigen::MatrixXd states;        ///< dim x T
    Eigen::MatrixXd observations;  ///< dy x T
};

CrnnTrajectory crnn_simulate(const CrnnParams& params, std::size_t length, const RngStream& rng);

/// log density of a centred Student-t with the given scale and degrees of freedom.
double student_t_logpdf(double r, double scale, double df);

class CrnnModel final : public StateSpaceModel {
public:
    CrnnModel(CrnnParams params, Eigen::MatrixXd observations);

    std::size_t state_dim() const override { return params_.state_dim(); }
    void init_sample(RngStream& rng, StateOut out) const override;
    void transition_sample(std::size_t s, State x, RngStream& rng, StateOut out) const override;
    double transition_density(std::size_t s, State x, State x_next) const override;
    std::optional<double> transition_density_upper(std::size_t s) const override;
    double potential(std::size_t s, State x) const override;
    double log_potential(std::size_t s, State x) const override;

    const CrnnParams& params() const noexcept { return params_; }
    const Eigen::MatrixXd& observations() const noexcept { return observations_; }
    std::size_t num_observations() const noexcept { return static_cast<std::size_t>(observations_.cols()); }

private:
    CrnnParams params_;
    Eigen::MatrixXd observations_;
    double log_transition_normalizer_;
    double t_log_normalizer_;
};

}  // namespace smc::models
