#include "smc/models/crnn.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "smc/error.hpp"

namespace smc::models {

CrnnParams CrnnParams::with_random_weights(std::size_t dim, std::size_t obs_dim, const RngStream& rng)
{
    CrnnParams p;
    RngStream stream = rng;
    const double sd = 1.0 / std::sqrt(static_cast<double>(dim));
    const auto d = static_cast<Eigen::Index>(dim);
    p.W = Eigen::MatrixXd::NullaryExpr(d, d, [&] { return sd * stream.normal(); });
    p.B = Eigen::MatrixXd::NullaryExpr(static_cast<Eigen::Index>(obs_dim), d, [&] { return sd * stream.normal(); });
    return p;
}

void CrnnParams::validate() const
{
    if (W.rows() < 1 || W.rows() != W.cols() || B.cols() != W.rows() || B.rows() < 1)
        fail(Errc::DimensionMismatch, "inconsistent CRNN dimensions");
    if (W.rows() > kMaxStateDim || B.rows() > kMaxStateDim)
        fail(Errc::DimensionMismatch, "CRNN dimension too large");
    if (!(tau > 0.0)) fail(Errc::InvalidArgument, "tau must be positive");
    if (!(obs_scale > 0.0) || !(obs_df > 0.0)) fail(Errc::InvalidArgument, "Student-t scale and df must be positive");
    if (!(state_noise_var >= 0.0) || !(init_var >= 0.0)) fail(Errc::InvalidArgument, "variances must be nonnegative");
}

void CrnnParams::transition_mean(State x, std::span<double> out) const
{
    const auto d = W.rows();
    const double rate = delta / tau;
    std::array<double, kMaxStateDim> t{};
    for (Eigen::Index j = 0; j < d; ++j) t[static_cast<std::size_t>(j)] = std::tanh(x[static_cast<std::size_t>(j)]);
    for (Eigen::Index i = 0; i < d; ++i) {
        double wt = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) wt += W(i, j) * t[static_cast<std::size_t>(j)];
        const double xi = x[static_cast<std::size_t>(i)];
        out[static_cast<std::size_t>(i)] = xi + rate * (-xi + gamma * wt);
    }
}

double student_t_logpdf(double r, double scale, double df)
{
    const double z = r / scale;
    return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi) -
           std::log(scale) - 0.5 * (df + 1.0) * std::log1p(z * z / df);
}

CrnnTrajectory crnn_simulate(const CrnnParams& params, std::size_t length, const RngStream& rng)
{
    params.validate();
    const auto d = params.W.rows();
    const auto dy = params.B.rows();
    const auto len = static_cast<Eigen::Index>(length);
    CrnnTrajectory out{Eigen::MatrixXd(d, len), Eigen::MatrixXd(dy, len)};
    RngStream stream = rng;
    std::gamma_distribution<double> chi2_half(0.5 * params.obs_df, 2.0);

    const double init_sd = std::sqrt(params.init_var);
    const double noise_sd = std::sqrt(params.state_noise_var);
    Eigen::VectorXd x(d);
    Eigen::VectorXd mean(d);
    for (Eigen::Index i = 0; i < d; ++i) x[i] = init_sd * stream.normal();
    for (Eigen::Index m = 0; m < len; ++m) {
        if (m > 0) {
            params.transition_mean({x.data(), static_cast<std::size_t>(d)}, {mean.data(), static_cast<std::size_t>(d)});
            for (Eigen::Index i = 0; i < d; ++i) x[i] = mean[i] + noise_sd * stream.normal();
        }
        out.states.col(m) = x;
        const Eigen::VectorXd bx = params.B * x;
        for (Eigen::Index k = 0; k < dy; ++k) {
            const double z = stream.normal();
            const double chi2 = chi2_half(stream);
            out.observations(k, m) = bx[k] + params.obs_scale * z / std::sqrt(chi2 / params.obs_df);
        }
    }
    return out;
}

CrnnModel::CrnnModel(CrnnParams params, Eigen::MatrixXd observations)
    : params_(std::move(params)), observations_(std::move(observations))
{
    params_.validate();
    if (!(params_.state_noise_var > 0.0)) fail(Errc::SingularCovariance, "state noise variance must be positive");
    if (observations_.cols() > 0 && observations_.rows() != params_.B.rows())
        fail(Errc::DimensionMismatch, "observation dimension does not match B");
    const double d = static_cast<double>(params_.state_dim());
    log_transition_normalizer_ = -0.5 * d * std::log(2.0 * std::numbers::pi * params_.state_noise_var);
    t_log_normalizer_ = student_t_logpdf(0.0, params_.obs_scale, params_.obs_df);
}

void CrnnModel::init_sample(RngStream& rng, StateOut out) const
{
    const double sd = std::sqrt(params_.init_var);
    for (double& v : out) v = sd * rng.normal();
}

void CrnnModel::transition_sample(std::size_t, State x, RngStream& rng, StateOut out) const
{
    params_.transition_mean(x, out);
    const double sd = std::sqrt(params_.state_noise_var);
    for (double& v : out) v += sd * rng.normal();
}

double CrnnModel::transition_density(std::size_t, State x, State x_next) const
{
    std::array<double, kMaxStateDim> mean{};
    const std::size_t d = params_.state_dim();
    params_.transition_mean(x, {mean.data(), d});
    double quad = 0.0;
    for (std::size_t i = 0; i < d; ++i) quad += (x_next[i] - mean[i]) * (x_next[i] - mean[i]);
    return std::exp(log_transition_normalizer_ - 0.5 * quad / params_.state_noise_var);
}

std::optional<double> CrnnModel::transition_density_upper(std::size_t) const
{
    return std::exp(log_transition_normalizer_);
}

double CrnnModel::log_potential(std::size_t s, State x) const
{
    if (s >= num_observations()) return 0.0;
    const auto dy = params_.B.rows();
    const auto d = params_.B.cols();
    const auto col = static_cast<Eigen::Index>(s);
    const double nu = params_.obs_df;
    const double scale2 = params_.obs_scale * params_.obs_scale;
    double acc = static_cast<double>(dy) * t_log_normalizer_;
    for (Eigen::Index k = 0; k < dy; ++k) {
        double bx = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) bx += params_.B(k, j) * x[static_cast<std::size_t>(j)];
        const double r = observations_(k, col) - bx;
        acc -= 0.5 * (nu + 1.0) * std::log1p(r * r / (nu * scale2));
    }
    return acc;
}

double CrnnModel::potential(std::size_t s, State x) const
{
    return std::exp(log_potential(s, x));
}

}  // namespace smc::models
