#include "smc/models/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::models {

namespace {

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

void check_observations(const LgssmParams& params, const Eigen::MatrixXd& obs)
{
    params.validate_shapes();
    if (obs.cols() > 0 && obs.rows() != params.B.rows())
        fail(Errc::DimensionMismatch, "observation dimension does not match B");
}

}  // namespace

KalmanResult kalman_filter(const LgssmParams& params, const Eigen::MatrixXd& observations, std::size_t n_states)
{
    check_observations(params, observations);
    const auto n_obs = static_cast<std::size_t>(observations.cols());
    const std::size_t n = std::max(n_states, n_obs);
    const auto dx = params.A.rows();
    const auto dy = params.B.rows();
    const Eigen::MatrixXd state_cov = params.state_cov();
    const Eigen::MatrixXd obs_cov = params.obs_cov();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dx, dx);

    KalmanResult r;
    r.predicted_means.reserve(n);
    r.predicted_covs.reserve(n);
    r.filtered_means.reserve(n);
    r.filtered_covs.reserve(n);

    for (std::size_t s = 0; s < n; ++s) {
        Eigen::VectorXd mp;
        Eigen::MatrixXd pp;
        if (s == 0) {
            mp = params.init_mean;
            pp = params.init_cov;
        } else {
            mp = params.A * r.filtered_means.back();
            pp = symmetrize(params.A * r.filtered_covs.back() * params.A.transpose() + state_cov);
        }
        r.predicted_means.push_back(mp);
        r.predicted_covs.push_back(pp);
        if (s >= n_obs) {
            r.filtered_means.push_back(mp);
            r.filtered_covs.push_back(pp);
            continue;
        }

        const Eigen::MatrixXd innov_cov = symmetrize(params.B * pp * params.B.transpose() + obs_cov);
        Eigen::LLT<Eigen::MatrixXd> llt(innov_cov);
        if (llt.info() != Eigen::Success)
            fail(Errc::SingularInnovation, fmt::format("innovation covariance not positive definite at time {}", s));
        const Eigen::MatrixXd L = llt.matrixL();
        if ((L.diagonal().array() <= 0.0).any())
            fail(Errc::SingularInnovation, fmt::format("innovation covariance singular at time {}", s));

        const Eigen::VectorXd innov = observations.col(static_cast<Eigen::Index>(s)) - params.B * mp;
        const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(innov);
        r.loglik += -0.5 * static_cast<double>(dy) * std::log(2.0 * std::numbers::pi) -
                    L.diagonal().array().log().sum() - 0.5 * z.squaredNorm();

        // K = P B^T S^{-1}
        const Eigen::MatrixXd gain = llt.solve(params.B * pp).transpose();
        const Eigen::MatrixXd ikb = eye - gain * params.B;
        r.filtered_means.push_back(mp + gain * innov);
        r.filtered_covs.push_back(symmetrize(ikb * pp * ikb.transpose() + gain * obs_cov * gain.transpose()));
    }
    return r;
}

Eigen::MatrixXd SmoothedMoments::second_moment(std::size_t s) const
{
    return covs[s] + means[s] * means[s].transpose();
}

Eigen::MatrixXd SmoothedMoments::lag_one_moment(std::size_t s) const
{
    return lag_covs[s] + means[s] * means[s + 1].transpose();
}

Eigen::MatrixXd SmoothedMoments::lag_one_sum() const
{
    const auto dx = means.front().size();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dx, dx);
    for (std::size_t s = 0; s + 1 < means.size(); ++s) acc += lag_one_moment(s);
    return acc;
}

SmoothedMoments disturbance_smooth(const LgssmParams& params, const Eigen::MatrixXd& observations,
                                   std::optional<std::size_t> horizon)
{
    const auto n_obs = static_cast<std::size_t>(observations.cols());
    const std::size_t h = horizon.value_or(n_obs > 0 ? n_obs - 1 : 0);
    const KalmanResult kf = kalman_filter(params, observations, h + 1);

    SmoothedMoments out;
    out.loglik = kf.loglik;
    out.means.resize(h + 1);
    out.covs.resize(h + 1);
    out.lag_covs.resize(h);
    out.means[h] = kf.filtered_means[h];
    out.covs[h] = kf.filtered_covs[h];
    for (std::size_t s = h; s-- > 0;) {
        const Eigen::MatrixXd& pf = kf.filtered_covs[s];
        const Eigen::MatrixXd& pp = kf.predicted_covs[s + 1];
        // J = P_{s|s} A^T P_{s+1|s}^{-1}, computed as (P_{s+1|s}^{-1} A P_{s|s})^T.
        const Eigen::MatrixXd gain = pp.ldlt().solve(params.A * pf).transpose();
        out.means[s] = kf.filtered_means[s] + gain * (out.means[s + 1] - kf.predicted_means[s + 1]);
        out.covs[s] = symmetrize(pf + gain * (out.covs[s + 1] - pp) * gain.transpose());
        out.lag_covs[s] = gain * out.covs[s + 1];
    }
    return out;
}

Eigen::VectorXd LgssmScore::flatten() const
{
    Eigen::VectorXd v(A.size() + B.size());
    v << A.reshaped(), B.reshaped();
    return v;
}

namespace {

struct SufficientStats {
    Eigen::MatrixXd s00;  ///< sum_{s<T-1} E[x_s x_s^T]
    Eigen::MatrixXd s10;  ///< sum_{s<T-1} E[x_{s+1} x_s^T]
    Eigen::MatrixXd sxx;  ///< sum_{s<T} E[x_s x_s^T]
    Eigen::MatrixXd syx;  ///< sum_{s<T} y_s E[x_s]^T
    double loglik;
};

SufficientStats sufficient_stats(const LgssmParams& params, const Eigen::MatrixXd& obs)
{
    const auto n_obs = static_cast<std::size_t>(obs.cols());
    if (n_obs == 0) fail(Errc::InvalidArgument, "no observations");
    const SmoothedMoments sm = disturbance_smooth(params, obs);
    const auto dx = params.A.rows();
    const auto dy = params.B.rows();
    SufficientStats st{Eigen::MatrixXd::Zero(dx, dx), Eigen::MatrixXd::Zero(dx, dx), Eigen::MatrixXd::Zero(dx, dx),
                       Eigen::MatrixXd::Zero(dy, dx), sm.loglik};
    for (std::size_t s = 0; s < n_obs; ++s) {
        const Eigen::MatrixXd second = sm.second_moment(s);
        st.sxx += second;
        st.syx += obs.col(static_cast<Eigen::Index>(s)) * sm.means[s].transpose();
        if (s + 1 < n_obs) {
            st.s00 += second;
            st.s10 += sm.lag_one_moment(s).transpose();
        }
    }
    return st;
}

}  // namespace

LgssmScore lgssm_exact_score(const LgssmParams& params, const Eigen::MatrixXd& observations)
{
    const SufficientStats st = sufficient_stats(params, observations);
    const Eigen::MatrixXd q_inv = params.state_cov().inverse();
    const Eigen::MatrixXd r_inv = params.obs_cov().inverse();
    return {q_inv * (st.s10 - params.A * st.s00), r_inv * (st.syx - params.B * st.sxx)};
}

EmResult lgssm_exact_mle(const LgssmParams& params0, const Eigen::MatrixXd& observations, std::size_t iters,
                         double tol)
{
    if (iters < 1) fail(Errc::InvalidArgument, "EM needs at least one iteration");
    EmResult res{params0, {}, 0};
    for (std::size_t it = 0; it < iters; ++it) {
        const SufficientStats st = sufficient_stats(res.params, observations);
        res.logliks.push_back(st.loglik);
        const Eigen::MatrixXd a_new = st.s00.transpose().ldlt().solve(st.s10.transpose()).transpose();
        const Eigen::MatrixXd b_new = st.sxx.transpose().ldlt().solve(st.syx.transpose()).transpose();
        const double move = std::max((a_new - res.params.A).cwiseAbs().maxCoeff(),
                                     (b_new - res.params.B).cwiseAbs().maxCoeff());
        res.params.A = a_new;
        res.params.B = b_new;
        res.iterations = it + 1;
        if (move < tol) break;
    }
    res.logliks.push_back(kalman_filter(res.params, observations).loglik);
    return res;
}

}  // namespace smc::models
