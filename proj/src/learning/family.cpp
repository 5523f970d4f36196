#include "smc/learning/family.hpp"

#include <array>
#include <cmath>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::learning {

namespace {

void parse_blocks(const std::vector<std::string>& blocks, const char* first, const char* second, bool& has_first,
                  bool& has_second)
{
    for (const auto& b : blocks) {
        if (b == first)
            has_first = true;
        else if (b == second)
            has_second = true;
        else
            fail(Errc::UnsupportedParameter,
                 fmt::format("cannot learn block '{}'; supported blocks are {} and {}", b, first, second));
    }
    if (!has_first && !has_second) fail(Errc::UnsupportedParameter, "no free parameter blocks");
}

void check_theta(const ParametricFamily& family, const Eigen::VectorXd& theta)
{
    if (static_cast<std::size_t>(theta.size()) != family.param_dim())
        fail(Errc::DimensionMismatch,
             fmt::format("theta has {} entries, family expects {}", theta.size(), family.param_dim()));
}

std::vector<std::string> matrix_names(const char* block, Eigen::Index rows, Eigen::Index cols)
{
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) names.push_back(fmt::format("{}_{}_{}", block, i + 1, j + 1));
    return names;
}

// grad log{g_s(x) m(x, x')} in (A, B) for the linear Gaussian model.
class LgssmScoreFunctional final : public AdditiveFunctional {
public:
    LgssmScoreFunctional(models::LgssmParams params, const Eigen::MatrixXd& observations, bool free_a, bool free_b)
        : params_(std::move(params)),
          observations_(observations),
          state_prec_(params_.state_cov().inverse()),
          obs_prec_(params_.obs_cov().inverse()),
          free_a_(free_a),
          free_b_(free_b)
    {
    }

    std::size_t dim() const override
    {
        return (free_a_ ? static_cast<std::size_t>(params_.A.size()) : 0) +
               (free_b_ ? static_cast<std::size_t>(params_.B.size()) : 0);
    }

    void term(std::size_t s, State x, State x_next, std::span<double> out) const override
    {
        const auto dx = params_.A.rows();
        const auto dy = params_.B.rows();
        std::size_t pos = 0;
        std::array<double, kMaxStateDim> r{};
        std::array<double, kMaxStateDim> w{};
        if (free_a_) {
            // Sigma_Q^{-1} (x' - A x) x^T
            for (Eigen::Index i = 0; i < dx; ++i) {
                double mean = 0.0;
                for (Eigen::Index j = 0; j < dx; ++j) mean += params_.A(i, j) * x[static_cast<std::size_t>(j)];
                r[static_cast<std::size_t>(i)] = x_next[static_cast<std::size_t>(i)] - mean;
            }
            for (Eigen::Index i = 0; i < dx; ++i) {
                double v = 0.0;
                for (Eigen::Index j = 0; j < dx; ++j) v += state_prec_(i, j) * r[static_cast<std::size_t>(j)];
                w[static_cast<std::size_t>(i)] = v;
            }
            for (Eigen::Index j = 0; j < dx; ++j)
                for (Eigen::Index i = 0; i < dx; ++i)
                    out[pos++] = w[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        }
        if (free_b_) {
            if (s >= static_cast<std::size_t>(observations_.cols())) {
                for (Eigen::Index n = 0; n < params_.B.size(); ++n) out[pos++] = 0.0;
                return;
            }
            // Sigma_R^{-1} (y_s - B x) x^T
            const auto col = static_cast<Eigen::Index>(s);
            for (Eigen::Index i = 0; i < dy; ++i) {
                double mean = 0.0;
                for (Eigen::Index j = 0; j < dx; ++j) mean += params_.B(i, j) * x[static_cast<std::size_t>(j)];
                r[static_cast<std::size_t>(i)] = observations_(i, col) - mean;
            }
            for (Eigen::Index i = 0; i < dy; ++i) {
                double v = 0.0;
                for (Eigen::Index j = 0; j < dy; ++j) v += obs_prec_(i, j) * r[static_cast<std::size_t>(j)];
                w[static_cast<std::size_t>(i)] = v;
            }
            for (Eigen::Index j = 0; j < dx; ++j)
                for (Eigen::Index i = 0; i < dy; ++i)
                    out[pos++] = w[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        }
    }

private:
    models::LgssmParams params_;
    const Eigen::MatrixXd& observations_;
    Eigen::MatrixXd state_prec_;
    Eigen::MatrixXd obs_prec_;
    bool free_a_;
    bool free_b_;
};

class CrnnScoreFunctional final : public AdditiveFunctional {
public:
    CrnnScoreFunctional(models::CrnnParams params, const Eigen::MatrixXd& observations, bool free_w, bool free_b)
        : params_(std::move(params)), observations_(observations), free_w_(free_w), free_b_(free_b)
    {
    }

    std::size_t dim() const override
    {
        return (free_w_ ? static_cast<std::size_t>(params_.W.size()) : 0) +
               (free_b_ ? static_cast<std::size_t>(params_.B.size()) : 0);
    }

    void term(std::size_t s, State x, State x_next, std::span<double> out) const override
    {
        const auto d = params_.W.rows();
        const auto dy = params_.B.rows();
        std::size_t pos = 0;
        if (free_w_) {
            std::array<double, kMaxStateDim> mean{};
            params_.transition_mean(x, {mean.data(), static_cast<std::size_t>(d)});
            const double c = params_.delta / params_.tau * params_.gamma / params_.state_noise_var;
            for (Eigen::Index j = 0; j < d; ++j) {
                const double t = std::tanh(x[static_cast<std::size_t>(j)]);
                for (Eigen::Index i = 0; i < d; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    out[pos++] = c * (x_next[ui] - mean[ui]) * t;
                }
            }
        }
        if (free_b_) {
            if (s >= static_cast<std::size_t>(observations_.cols())) {
                for (Eigen::Index n = 0; n < params_.B.size(); ++n) out[pos++] = 0.0;
                return;
            }
            const auto col = static_cast<Eigen::Index>(s);
            const double nu = params_.obs_df;
            const double nu_s2 = nu * params_.obs_scale * params_.obs_scale;
            std::array<double, kMaxStateDim> w{};
            for (Eigen::Index k = 0; k < dy; ++k) {
                double bx = 0.0;
                for (Eigen::Index j = 0; j < d; ++j) bx += params_.B(k, j) * x[static_cast<std::size_t>(j)];
                const double r = observations_(k, col) - bx;
                w[static_cast<std::size_t>(k)] = (nu + 1.0) * r / (nu_s2 + r * r);
            }
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index k = 0; k < dy; ++k)
                    out[pos++] = w[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(j)];
        }
    }

private:
    models::CrnnParams params_;
    const Eigen::MatrixXd& observations_;
    bool free_w_;
    bool free_b_;
};

}  // namespace

std::unique_ptr<AdditiveFunctional> fisher_functional(const ParametricFamily& family, const Eigen::VectorXd& theta)
{
    return family.score_functional(theta);
}

LgssmFamily::LgssmFamily(models::LgssmParams base, Eigen::MatrixXd observations, std::vector<std::string> free_blocks)
    : base_(std::move(base)), observations_(std::move(observations))
{
    base_.validate_shapes();
    parse_blocks(free_blocks, "A", "B", free_a_, free_b_);
}

std::size_t LgssmFamily::param_dim() const
{
    return (free_a_ ? static_cast<std::size_t>(base_.A.size()) : 0) +
           (free_b_ ? static_cast<std::size_t>(base_.B.size()) : 0);
}

std::vector<std::string> LgssmFamily::param_names() const
{
    std::vector<std::string> names;
    if (free_a_) names = matrix_names("A", base_.A.rows(), base_.A.cols());
    if (free_b_) {
        auto b = matrix_names("B", base_.B.rows(), base_.B.cols());
        names.insert(names.end(), b.begin(), b.end());
    }
    return names;
}

models::LgssmParams LgssmFamily::params_at(const Eigen::VectorXd& theta) const
{
    check_theta(*this, theta);
    models::LgssmParams p = base_;
    Eigen::Index pos = 0;
    if (free_a_) {
        p.A = theta.segment(pos, base_.A.size()).reshaped(base_.A.rows(), base_.A.cols());
        pos += base_.A.size();
    }
    if (free_b_) p.B = theta.segment(pos, base_.B.size()).reshaped(base_.B.rows(), base_.B.cols());
    return p;
}

Eigen::VectorXd LgssmFamily::theta_of(const models::LgssmParams& params) const
{
    Eigen::VectorXd theta(static_cast<Eigen::Index>(param_dim()));
    Eigen::Index pos = 0;
    if (free_a_) {
        theta.segment(pos, params.A.size()) = params.A.reshaped();
        pos += params.A.size();
    }
    if (free_b_) theta.segment(pos, params.B.size()) = params.B.reshaped();
    return theta;
}

std::unique_ptr<StateSpaceModel> LgssmFamily::make_model(const Eigen::VectorXd& theta) const
{
    return std::make_unique<models::LgssmModel>(params_at(theta), observations_);
}

std::unique_ptr<AdditiveFunctional> LgssmFamily::score_functional(const Eigen::VectorXd& theta) const
{
    return std::make_unique<LgssmScoreFunctional>(params_at(theta), observations_, free_a_, free_b_);
}

CrnnFamily::CrnnFamily(models::CrnnParams base, Eigen::MatrixXd observations, std::vector<std::string> free_blocks)
    : base_(std::move(base)), observations_(std::move(observations))
{
    base_.validate();
    parse_blocks(free_blocks, "W", "B", free_w_, free_b_);
}

std::size_t CrnnFamily::param_dim() const
{
    return (free_w_ ? static_cast<std::size_t>(base_.W.size()) : 0) +
           (free_b_ ? static_cast<std::size_t>(base_.B.size()) : 0);
}

std::vector<std::string> CrnnFamily::param_names() const
{
    std::vector<std::string> names;
    if (free_w_) names = matrix_names("W", base_.W.rows(), base_.W.cols());
    if (free_b_) {
        auto b = matrix_names("B", base_.B.rows(), base_.B.cols());
        names.insert(names.end(), b.begin(), b.end());
    }
    return names;
}

models::CrnnParams CrnnFamily::params_at(const Eigen::VectorXd& theta) const
{
    check_theta(*this, theta);
    models::CrnnParams p = base_;
    Eigen::Index pos = 0;
    if (free_w_) {
        p.W = theta.segment(pos, base_.W.size()).reshaped(base_.W.rows(), base_.W.cols());
        pos += base_.W.size();
    }
    if (free_b_) p.B = theta.segment(pos, base_.B.size()).reshaped(base_.B.rows(), base_.B.cols());
    return p;
}

Eigen::VectorXd CrnnFamily::theta_of(const models::CrnnParams& params) const
{
    Eigen::VectorXd theta(static_cast<Eigen::Index>(param_dim()));
    Eigen::Index pos = 0;
    if (free_w_) {
        theta.segment(pos, params.W.size()) = params.W.reshaped();
        pos += params.W.size();
    }
    if (free_b_) theta.segment(pos, params.B.size()) = params.B.reshaped();
    return theta;
}

std::unique_ptr<StateSpaceModel> CrnnFamily::make_model(const Eigen::VectorXd& theta) const
{
    return std::make_unique<models::CrnnModel>(params_at(theta), observations_);
}

std::unique_ptr<AdditiveFunctional> CrnnFamily::score_functional(const Eigen::VectorXd& theta) const
{
    return std::make_unique<CrnnScoreFunctional>(params_at(theta), observations_, free_w_, free_b_);
}

double singular_value_distance(const models::LgssmParams& params, const models::LgssmParams& reference)
{
    auto sv = [](const models::LgssmParams& p) {
        const Eigen::VectorXd a = Eigen::JacobiSVD<Eigen::MatrixXd>(p.A).singularValues();
        const Eigen::VectorXd b = Eigen::JacobiSVD<Eigen::MatrixXd>(p.B).singularValues();
        Eigen::VectorXd v(a.size() + b.size());
        v << a, b;
        return v;
    };
    const Eigen::VectorXd x = sv(params);
    const Eigen::VectorXd y = sv(reference);
    if (x.size() != y.size()) fail(Errc::DimensionMismatch, "singular value distance: shapes differ");
    return (x - y).norm();
}

}  // namespace smc::learning
