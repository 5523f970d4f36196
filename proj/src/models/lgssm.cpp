#include "smc/models/lgssm.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::models {

namespace {

// Symmetric square root that tolerates singular (PSD) covariances.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cov + cov.transpose()));
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

LgssmParams LgssmParams::scalar(double a, double q, double b, double r)
{
    LgssmParams p;
    p.A = Eigen::MatrixXd::Constant(1, 1, a);
    p.Q = Eigen::MatrixXd::Constant(1, 1, q);
    p.B = Eigen::MatrixXd::Constant(1, 1, b);
    p.R = Eigen::MatrixXd::Constant(1, 1, r);
    p.init_mean = Eigen::VectorXd::Zero(1);
    p.init_cov = Eigen::MatrixXd::Identity(1, 1);
    return p;
}

void LgssmParams::validate_shapes() const
{
    const auto dx = A.rows();
    if (dx < 1 || A.cols() != dx || Q.rows() != dx || B.cols() != dx || R.rows() != B.rows() || B.rows() < 1 ||
        init_mean.size() != dx || init_cov.rows() != dx || init_cov.cols() != dx)
        fail(Errc::DimensionMismatch, "inconsistent LGSSM dimensions");
    if (dx > kMaxStateDim || B.rows() > kMaxStateDim)
        fail(Errc::DimensionMismatch, fmt::format("dimensions above {} are not supported", kMaxStateDim));
}

LgssmTrajectory lgssm_simulate(const LgssmParams& params, std::size_t length, const RngStream& rng)
{
    params.validate_shapes();
    const auto dx = params.A.rows();
    const auto dy = params.B.rows();
    LgssmTrajectory out{Eigen::MatrixXd(dx, static_cast<Eigen::Index>(length)),
                        Eigen::MatrixXd(dy, static_cast<Eigen::Index>(length))};
    if (length == 0) return out;

    RngStream stream = rng;
    auto normals = [&stream](Eigen::Index n) {
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) z[i] = stream.normal();
        return z;
    };
    const Eigen::MatrixXd init_root = psd_sqrt(params.init_cov);
    Eigen::VectorXd x = params.init_mean + init_root * normals(dx);
    for (std::size_t m = 0; m < length; ++m) {
        const auto col = static_cast<Eigen::Index>(m);
        if (m > 0) x = params.A * x + params.Q * normals(params.Q.cols());
        out.states.col(col) = x;
        out.observations.col(col) = params.B * x + params.R * normals(params.R.cols());
    }
    return out;
}

GaussianKernel::GaussianKernel(const Eigen::MatrixXd& cov)
{
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (cov + cov.transpose()));
    if (llt.info() != Eigen::Success) fail(Errc::SingularCovariance, "covariance is not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    const auto n = L.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(L(i, i) > 1e-300)) fail(Errc::SingularCovariance, "covariance is numerically singular");
    chol_inv_ = L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
    log_normalizer_ = -0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) -
                      L.diagonal().array().log().sum();
}

double GaussianKernel::log_density(const double* residual) const noexcept
{
    const auto n = chol_inv_.rows();
    double quad = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double z = 0.0;
        for (Eigen::Index j = 0; j <= i; ++j) z += chol_inv_(i, j) * residual[j];
        quad += z * z;
    }
    return log_normalizer_ - 0.5 * quad;
}

LgssmModel::LgssmModel(LgssmParams params, Eigen::MatrixXd observations)
    : params_(std::move(params)), observations_(std::move(observations))
{
    params_.validate_shapes();
    if (observations_.cols() > 0 && observations_.rows() != params_.B.rows())
        fail(Errc::DimensionMismatch, "observation dimension does not match B");
    transition_ = GaussianKernel(params_.state_cov());
    emission_ = GaussianKernel(params_.obs_cov());
    init_chol_ = psd_sqrt(params_.init_cov);
    upper_ = std::exp(transition_.log_normalizer());
    if (params_.A.rows() == 1 && params_.B.rows() == 1 && params_.Q.cols() == 1) {
        scalar_ = Scalar{params_.A(0, 0),          params_.Q(0, 0),           transition_.chol_inv()(0, 0),
                         transition_.log_normalizer(), params_.B(0, 0),        emission_.chol_inv()(0, 0),
                         emission_.log_normalizer()};
    }
}

void LgssmModel::init_sample(RngStream& rng, StateOut out) const
{
    const auto dx = params_.A.rows();
    std::array<double, kMaxStateDim> z{};
    for (Eigen::Index i = 0; i < dx; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
    for (Eigen::Index i = 0; i < dx; ++i) {
        double v = params_.init_mean[i];
        for (Eigen::Index j = 0; j < dx; ++j) v += init_chol_(i, j) * z[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = v;
    }
}

void LgssmModel::transition_sample(std::size_t, State x, RngStream& rng, StateOut out) const
{
    if (scalar_) {
        const double z = rng.normal();
        out[0] = scalar_->a * x[0] + scalar_->q * z;
        return;
    }
    const auto dx = params_.A.rows();
    const auto dq = params_.Q.cols();
    std::array<double, kMaxStateDim> z{};
    for (Eigen::Index i = 0; i < dq; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
    for (Eigen::Index i = 0; i < dx; ++i) {
        double v = 0.0;
        for (Eigen::Index j = 0; j < dx; ++j) v += params_.A(i, j) * x[static_cast<std::size_t>(j)];
        for (Eigen::Index j = 0; j < dq; ++j) v += params_.Q(i, j) * z[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = v;
    }
}

double LgssmModel::log_transition_density(State x, State x_next) const noexcept
{
    if (scalar_) {
        const double z = scalar_->trans_ci * (x_next[0] - scalar_->a * x[0]);
        return scalar_->trans_norm - 0.5 * (z * z);
    }
    const auto dx = params_.A.rows();
    std::array<double, kMaxStateDim> r{};
    for (Eigen::Index i = 0; i < dx; ++i) {
        double mean = 0.0;
        for (Eigen::Index j = 0; j < dx; ++j) mean += params_.A(i, j) * x[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = x_next[static_cast<std::size_t>(i)] - mean;
    }
    return transition_.log_density(r.data());
}

double LgssmModel::transition_density(std::size_t, State x, State x_next) const
{
    return std::exp(log_transition_density(x, x_next));
}

std::optional<double> LgssmModel::transition_density_upper(std::size_t) const
{
    return upper_;
}

double LgssmModel::log_potential(std::size_t s, State x) const
{
    if (s >= num_observations()) return 0.0;
    if (scalar_) {
        const double z = scalar_->em_ci * (observations_(0, static_cast<Eigen::Index>(s)) - scalar_->b * x[0]);
        return scalar_->em_norm - 0.5 * (z * z);
    }
    const auto dy = params_.B.rows();
    const auto dx = params_.B.cols();
    const auto col = static_cast<Eigen::Index>(s);
    std::array<double, kMaxStateDim> r{};
    for (Eigen::Index i = 0; i < dy; ++i) {
        double mean = 0.0;
        for (Eigen::Index j = 0; j < dx; ++j) mean += params_.B(i, j) * x[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = observations_(i, col) - mean;
    }
    return emission_.log_density(r.data());
}

double LgssmModel::potential(std::size_t s, State x) const
{
    return std::exp(log_potential(s, x));
}

}  // namespace smc::models
