#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smc/functional.hpp"
#include "smc/model.hpp"
#include "smc/models/crnn.hpp"
#include "smc/models/lgssm.hpp"

namespace smc::learning {

/// A model indexed by a flat parameter vector theta, together with the
/// gradient of log{g_s m_s} needed for Fisher-identity score estimation.
class ParametricFamily {
public:
    virtual ~ParametricFamily() = default;

    virtual std::size_t param_dim() const = 0;
    virtual std::vector<std::string> param_names() const = 0;
    /// Number of observations T; smoothing runs over x_{0:T}.
    virtual std::size_t num_observations() const = 0;
    virtual std::unique_ptr<StateSpaceModel> make_model(const Eigen::VectorXd& theta) const = 0;
    /// term(s, x, x') = grad_theta log{g_s(x) m_s(x, x')}.
    virtual std::unique_ptr<AdditiveFunctional> score_functional(const Eigen::VectorXd& theta) const = 0;
    /// Whether only the Hybrid backward sampler is admissible.
    virtual bool requires_hybrid_sampler() const { return false; }
};

/// Score functional of `family` at theta. Throws DimensionMismatch when theta
/// has the wrong length.
std::unique_ptr<AdditiveFunctional> fisher_functional(const ParametricFamily& family, const Eigen::VectorXd& theta);

/// LGSSM with free blocks among {"A", "B"}; Q, R and the initial law stay at
/// their base values. theta = (vec A, vec B), column-major, free blocks only.
class LgssmFamily final : public ParametricFamily {
public:
    /// Throws UnsupportedParameter for any block other than A or B.
    LgssmFamily(models::LgssmParams base, Eigen::MatrixXd observations,
                std::vector<std::string> free_blocks = {"A", "B"});

    std::size_t param_dim() const override;
    std::vector<std::string> param_names() const override;
    std::size_t num_observations() const override { return static_cast<std::size_t>(observations_.cols()); }
    std::unique_ptr<StateSpaceModel> make_model(const Eigen::VectorXd& theta) const override;
    std::unique_ptr<AdditiveFunctional> score_functional(const Eigen::VectorXd& theta) const override;

    models::LgssmParams params_at(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd theta_of(const models::LgssmParams& params) const;
    const models::LgssmParams& base() const noexcept { return base_; }
    const Eigen::MatrixXd& observations() const noexcept { return observations_; }

private:
    models::LgssmParams base_;
    Eigen::MatrixXd observations_;
    bool free_a_ = false;
    bool free_b_ = false;
};

/// CRNN with free blocks among {"W", "B"}.
class CrnnFamily final : public ParametricFamily {
public:
    CrnnFamily(models::CrnnParams base, Eigen::MatrixXd observations, std::vector<std::string> free_blocks = {"W", "B"});

    std::size_t param_dim() const override;
    std::vector<std::string> param_names() const override;
    std::size_t num_observations() const override { return static_cast<std::size_t>(observations_.cols()); }
    std::unique_ptr<StateSpaceModel> make_model(const Eigen::VectorXd& theta) const override;
    std::unique_ptr<AdditiveFunctional> score_functional(const Eigen::VectorXd& theta) const override;
    bool requires_hybrid_sampler() const override { return true; }

    models::CrnnParams params_at(const Eigen::VectorXd& theta) const;
    Eigen::VectorXd theta_of(const models::CrnnParams& params) const;

private:
    models::CrnnParams base_;
    Eigen::MatrixXd observations_;
    bool free_w_ = false;
    bool free_b_ = false;
};

/// Euclidean distance between the singular values of (A, B) and those of
/// the reference, each block sorted in decreasing order and concatenated.
double singular_value_distance(const models::LgssmParams& params, const models::LgssmParams& reference);

}  // namespace smc::learning
