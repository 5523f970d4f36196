#include "smc/acceptance/oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "smc/error.hpp"

namespace smc::oracle {

DenseGaussianSmoothing dense_lgssm_smoothing(const models::LgssmParams& params, const Eigen::MatrixXd& observations,
                                             std::size_t horizon)
{
    const auto dx = params.A.rows();
    const auto dy = params.B.rows();
    const auto n_obs = observations.cols();
    const auto n_states = static_cast<Eigen::Index>(horizon) + 1;

    // Unconditional means and marginal covariances.
    std::vector<Eigen::VectorXd> mu(static_cast<std::size_t>(n_states));
    std::vector<Eigen::MatrixXd> var(static_cast<std::size_t>(n_states));
    mu[0] = params.init_mean;
    var[0] = params.init_cov;
    for (Eigen::Index s = 1; s < n_states; ++s) {
        const auto u = static_cast<std::size_t>(s);
        mu[u] = params.A * mu[u - 1];
        var[u] = params.A * var[u - 1] * params.A.transpose() + params.Q * params.Q.transpose();
    }

    // Joint covariance of the stacked states: Cov(x_t, x_s) = A^{t-s} Var(x_s) for t >= s.
    const Eigen::Index nx = n_states * dx;
    Eigen::MatrixXd sxx(nx, nx);
    for (Eigen::Index s = 0; s < n_states; ++s) {
        Eigen::MatrixXd block = var[static_cast<std::size_t>(s)];
        for (Eigen::Index t = s; t < n_states; ++t) {
            sxx.block(t * dx, s * dx, dx, dx) = block;
            sxx.block(s * dx, t * dx, dx, dx) = block.transpose();
            block = params.A * block;
        }
    }
    Eigen::VectorXd mx(nx);
    for (Eigen::Index s = 0; s < n_states; ++s) mx.segment(s * dx, dx) = mu[static_cast<std::size_t>(s)];

    // Observations y_t = B x_t + R zeta_t.
    const Eigen::Index ny = n_obs * dy;
    Eigen::MatrixXd sxy = Eigen::MatrixXd::Zero(nx, ny);
    Eigen::MatrixXd syy = Eigen::MatrixXd::Zero(ny, ny);
    Eigen::VectorXd my(ny);
    Eigen::VectorXd y(ny);
    for (Eigen::Index t = 0; t < n_obs; ++t) {
        my.segment(t * dy, dy) = params.B * mu[static_cast<std::size_t>(t)];
        y.segment(t * dy, dy) = observations.col(t);
        for (Eigen::Index s = 0; s < n_states; ++s)
            sxy.block(s * dx, t * dy, dx, dy) = sxx.block(s * dx, t * dx, dx, dx) * params.B.transpose();
        for (Eigen::Index u = 0; u < n_obs; ++u)
            syy.block(t * dy, u * dy, dy, dy) = params.B * sxx.block(t * dx, u * dx, dx, dx) * params.B.transpose();
        syy.block(t * dy, t * dy, dy, dy) += params.R * params.R.transpose();
    }

    DenseGaussianSmoothing out;
    Eigen::VectorXd cond_mean = mx;
    Eigen::MatrixXd cond_cov = sxx;
    if (ny > 0) {
        Eigen::LLT<Eigen::MatrixXd> llt(syy);
        if (llt.info() != Eigen::Success) fail(Errc::SingularInnovation, "dense oracle: Cov(y) not positive definite");
        const Eigen::VectorXd resid = y - my;
        cond_mean += sxy * llt.solve(resid);
        cond_cov -= sxy * llt.solve(sxy.transpose());
        const Eigen::MatrixXd L = llt.matrixL();
        const Eigen::VectorXd z = L.triangularView<Eigen::Lower>().solve(resid);
        out.loglik = -0.5 * static_cast<double>(ny) * std::log(2.0 * std::numbers::pi) -
                     L.diagonal().array().log().sum() - 0.5 * z.squaredNorm();
    }
    for (Eigen::Index s = 0; s < n_states; ++s) {
        out.means.push_back(cond_mean.segment(s * dx, dx));
        out.covs.push_back(cond_cov.block(s * dx, s * dx, dx, dx));
        if (s + 1 < n_states) out.lag_covs.push_back(cond_cov.block(s * dx, (s + 1) * dx, dx, dx));
    }
    return out;
}

models::DiscreteSmoothing enumerate_hmm_paths(const models::DiscreteHmm& hmm, std::size_t horizon)
{
    const std::size_t k = hmm.num_states();
    const std::size_t n = horizon + 1;
    std::size_t total = 1;
    for (std::size_t s = 0; s < n; ++s) total *= k;

    models::DiscreteSmoothing out;
    out.marginals = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    out.pairwise.assign(horizon, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    std::vector<std::size_t> path(n);
    double z = 0.0;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t s = 0; s < n; ++s) {
            path[s] = c % k;
            c /= k;
        }
        double w = hmm.initial[static_cast<Eigen::Index>(path[0])];
        for (std::size_t s = 0; s + 1 < n; ++s)
            w *= hmm.emission(s, path[s]) *
                 hmm.transition(static_cast<Eigen::Index>(path[s]), static_cast<Eigen::Index>(path[s + 1]));
        z += w;
        for (std::size_t s = 0; s < n; ++s)
            out.marginals(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(path[s])) += w;
        for (std::size_t s = 0; s + 1 < n; ++s)
            out.pairwise[s](static_cast<Eigen::Index>(path[s]), static_cast<Eigen::Index>(path[s + 1])) += w;
    }
    out.marginals /= z;
    for (auto& p : out.pairwise) p /= z;
    out.log_normalizer = std::log(z);
    return out;
}

Eigen::MatrixXd sample_hmm_smoothing_path(const models::DiscreteHmm& hmm, std::size_t horizon, RngStream& rng)
{
    const auto k = static_cast<Eigen::Index>(hmm.num_states());
    const std::size_t n = horizon + 1;
    auto categorical = [&rng](const Eigen::VectorXd& w) {
        double u = rng.uniform() * w.sum();
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            if (u < w[i]) return i;
            u -= w[i];
        }
        Eigen::Index last = w.size() - 1;
        while (last > 0 && w[last] <= 0.0) --last;
        return last;
    };

    // Unnormalized predictive laws alpha_s(x) = P(X_s = x, y_{0:s-1}), rescaled per step.
    std::vector<Eigen::VectorXd> alpha(n);
    alpha[0] = hmm.initial;
    for (std::size_t s = 0; s + 1 < n; ++s) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(k);
        for (Eigen::Index x = 0; x < k; ++x)
            for (Eigen::Index xn = 0; xn < k; ++xn)
                next[xn] += alpha[s][x] * hmm.emission(s, static_cast<std::size_t>(x)) * hmm.transition(x, xn);
        alpha[s + 1] = next / next.sum();
    }
    Eigen::MatrixXd path(1, static_cast<Eigen::Index>(n));
    Eigen::Index x = categorical(alpha[n - 1]);
    path(0, static_cast<Eigen::Index>(n - 1)) = static_cast<double>(x);
    for (std::size_t s = n - 1; s-- > 0;) {
        Eigen::VectorXd w(k);
        for (Eigen::Index j = 0; j < k; ++j)
            w[j] = alpha[s][j] * hmm.emission(s, static_cast<std::size_t>(j)) * hmm.transition(j, x);
        x = categorical(w);
        path(0, static_cast<Eigen::Index>(s)) = static_cast<double>(x);
    }
    return path;
}

}  // namespace smc::oracle
