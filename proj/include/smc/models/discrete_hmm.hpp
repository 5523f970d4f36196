#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "smc/model.hpp"

namespace smc::models {

/// Finite-state HMM. emissions(s, x) is the potential g_s(x); times without
/// a row carry the unit potential.
struct DiscreteHmm {
    Eigen::VectorXd initial;     ///< K
    Eigen::MatrixXd transition;  ///< K x K, rows sum to one
    Eigen::MatrixXd emissions;   ///< T x K, nonnegative

    std::size_t num_states() const { return static_cast<std::size_t>(initial.size()); }
    double emission(std::size_t s, std::size_t x) const
    {
        return s < static_cast<std::size_t>(emissions.rows()) ? emissions(static_cast<Eigen::Index>(s),
                                                                           static_cast<Eigen::Index>(x))
                                                              : 1.0;
    }
    void validate() const;
};

/// The HMM as a state-space model on {0..K-1} (one coordinate holding the
/// index) with counting reference measure.
class DiscreteHmmModel final : public StateSpaceModel {
public:
    explicit DiscreteHmmModel(DiscreteHmm hmm);

    std::size_t state_dim() const override { return 1; }
    void init_sample(RngStream& rng, StateOut out) const override;
    void transition_sample(std::size_t s, State x, RngStream& rng, StateOut out) const override;
    double transition_density(std::size_t s, State x, State x_next) const override;
    std::optional<double> transition_density_upper(std::size_t s) const override;
    double potential(std::size_t s, State x) const override;

    const DiscreteHmm& hmm() const noexcept { return hmm_; }

private:
    static std::size_t index(State x) { return static_cast<std::size_t>(x[0]); }
    std::size_t draw(const Eigen::VectorXd& cdf, RngStream& rng) const;

    DiscreteHmm hmm_;
    Eigen::VectorXd initial_cdf_;
    std::vector<Eigen::VectorXd> transition_cdfs_;
    double max_transition_;
};

/// Exact law of X_{0:T} proportional to initial(x_0) prod_{s<T} g_s(x_s) P(x_s, x_{s+1}).
struct DiscreteSmoothing {
    Eigen::MatrixXd marginals;              ///< (T+1) x K
    std::vector<Eigen::MatrixXd> pairwise;  ///< pairwise[s](x, x') = P(X_s = x, X_{s+1} = x')
    double log_normalizer = 0.0;
};

DiscreteSmoothing discrete_fb_smooth(const DiscreteHmm& hmm, std::size_t horizon);

}  // namespace smc::models
