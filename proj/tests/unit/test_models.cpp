#include <cmath>

#include <Eigen/LU>

#include "doctest.h"
#include "smc/acceptance/oracles.hpp"
#include "smc/error.hpp"
#include "smc/models/crnn.hpp"
#include "smc/models/discrete_hmm.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/lgssm.hpp"

using namespace smc;
using namespace smc::models;

namespace {

LgssmParams two_dim()
{
    LgssmParams p;
    p.A.resize(2, 2);
    p.A << 0.9, 0.1, -0.2, 0.7;
    p.Q.resize(2, 2);
    p.Q << 0.5, 0.0, 0.1, 0.4;
    p.B.resize(1, 2);
    p.B << 1.0, -0.5;
    p.R = Eigen::MatrixXd::Constant(1, 1, 0.3);
    p.init_mean = Eigen::Vector2d(0.1, -0.2);
    p.init_cov = Eigen::Matrix2d::Identity();
    return p;
}

}  // namespace

TEST_CASE("LGSSM densities")
{
    const auto p = LgssmParams::benchmark();
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(1, 3, 0.4);
    const LgssmModel model(p, y);
    const double x[] = {1.3};
    const double mean[] = {0.97 * 1.3};
    CHECK(model.transition_density(0, x, mean) == doctest::Approx(*model.transition_density_upper(0)).epsilon(1e-14));
    CHECK(*model.transition_density_upper(0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * 0.36)));

    const double a[] = {0.4 / 0.54 + 0.2}, b[] = {0.4 / 0.54 - 0.2};
    CHECK(model.potential(1, a) == doctest::Approx(model.potential(1, b)).epsilon(1e-13));
    CHECK(model.potential(5, a) == 1.0);

    // Against the explicit Gaussian quadratic form, in two dimensions.
    const auto q = two_dim();
    const LgssmModel m2(q, Eigen::MatrixXd::Constant(1, 2, 0.7));
    const Eigen::Matrix2d cov = q.state_cov();
    for (int k = 0; k < 5; ++k) {
        const Eigen::Vector2d from(0.3 * k - 0.5, 0.2 - 0.1 * k);
        const Eigen::Vector2d to(0.25 * k, -0.4 * k + 0.3);
        const Eigen::Vector2d r = to - q.A * from;
        const double expected =
            -0.5 * r.dot(cov.inverse() * r) - std::log(2.0 * M_PI) - 0.5 * std::log(cov.determinant());
        CHECK(std::log(m2.transition_density(0, {from.data(), 2}, {to.data(), 2})) ==
              doctest::Approx(expected).epsilon(1e-12));
        const double ry = 0.7 - q.B.row(0).dot(from);
        const double ly = -0.5 * ry * ry / 0.09 - 0.5 * std::log(2.0 * M_PI * 0.09);
        CHECK(m2.log_potential(0, {from.data(), 2}) == doctest::Approx(ly).epsilon(1e-12));
    }
}

TEST_CASE("LGSSM simulation with an identity map and tiny noise stays put")
{
    auto p = LgssmParams::scalar(1.0, 1e-12, 1.0, 1e-12);
    p.init_cov(0, 0) = 1e-24;
    const auto t = lgssm_simulate(p, 50, RngStream(1));
    CHECK(t.states.cwiseAbs().maxCoeff() < 1e-9);
    CHECK((t.observations - t.states).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_THROWS_AS(LgssmModel(LgssmParams::scalar(1.0, 0.0, 1.0, 1.0), t.observations), Error);
}

TEST_CASE("Kalman filter conjugate update")
{
    // x0 ~ N(0,1), y0 = x0 + N(0,1): posterior N(y/2, 1/2).
    const auto p = LgssmParams::scalar(1.0, 1.0, 1.0, 1.0);
    const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(1, 1, 0.8);
    const auto kf = kalman_filter(p, y);
    CHECK(kf.filtered_means[0][0] == doctest::Approx(0.4));
    CHECK(kf.filtered_covs[0](0, 0) == doctest::Approx(0.5));
    CHECK(kf.loglik == doctest::Approx(-0.5 * std::log(2.0 * M_PI * 2.0) - 0.8 * 0.8 / 4.0));
}

TEST_CASE("Kalman filter and smoother match dense conditioning")
{
    for (const auto& p : {LgssmParams::benchmark(), two_dim()}) {
        const auto t = lgssm_simulate(p, 10, RngStream(2));
        const auto dense = oracle::dense_lgssm_smoothing(p, t.observations, 10);
        const auto sm = disturbance_smooth(p, t.observations, 10);
        CHECK(kalman_filter(p, t.observations).loglik == doctest::Approx(dense.loglik).epsilon(1e-10));
        for (std::size_t s = 0; s <= 10; ++s) {
            CHECK((sm.means[s] - dense.means[s]).cwiseAbs().maxCoeff() < 1e-9);
            CHECK((sm.covs[s] - dense.covs[s]).cwiseAbs().maxCoeff() < 1e-9);
            if (s < 10) CHECK((sm.lag_covs[s] - dense.lag_covs[s]).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("exact score matches finite differences")
{
    const auto p = two_dim();
    const auto t = lgssm_simulate(p, 30, RngStream(3));
    const Eigen::VectorXd g = lgssm_exact_score(p, t.observations).flatten();
    const double h = 1e-5;
    Eigen::Index k = 0;
    for (Eigen::MatrixXd LgssmParams::*block : {&LgssmParams::A, &LgssmParams::B}) {
        const auto& mat = p.*block;
        for (Eigen::Index j = 0; j < mat.cols(); ++j)
            for (Eigen::Index i = 0; i < mat.rows(); ++i, ++k) {
                auto up = p, down = p;
                (up.*block)(i, j) += h;
                (down.*block)(i, j) -= h;
                const double fd =
                    (kalman_filter(up, t.observations).loglik - kalman_filter(down, t.observations).loglik) / (2 * h);
                CHECK(g[k] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
            }
    }
}

TEST_CASE("EM increases the likelihood and stops at a stationary point")
{
    const auto truth = LgssmParams::benchmark();
    const auto t = lgssm_simulate(truth, 200, RngStream(4));
    const auto em = lgssm_exact_mle(LgssmParams::scalar(0.2, 0.6, 1.5, 0.33), t.observations, 500, 1e-12);
    for (std::size_t i = 1; i < em.logliks.size(); ++i) CHECK(em.logliks[i] >= em.logliks[i - 1] - 1e-9);
    CHECK(lgssm_exact_score(em.params, t.observations).flatten().norm() < 1e-6);
    const auto again = lgssm_exact_mle(em.params, t.observations, 1);
    CHECK(std::abs(again.params.A(0, 0) - em.params.A(0, 0)) < 1e-8);
}

TEST_CASE("CRNN pieces")
{
    auto p = CrnnParams::with_random_weights(3, 2, RngStream(5));
    p.W.setZero();
    p.delta = 1.0;
    p.tau = 1.0;
    const double x[] = {0.3, -1.0, 2.0};
    double out[3];
    p.transition_mean(x, out);
    for (double v : out) CHECK(v == 0.0);

    CHECK(std::exp(student_t_logpdf(0.0, 0.1, 2.0)) == doctest::Approx(3.5355339059).epsilon(1e-9));
    CHECK(student_t_logpdf(0.3, 0.1, 2.0) == student_t_logpdf(-0.3, 0.1, 2.0));

    // The transition density integrates to one (importance sampling from itself).
    const auto q = CrnnParams::with_random_weights(2, 2, RngStream(6));
    const CrnnModel model(q, Eigen::MatrixXd::Zero(2, 4));
    const double from[] = {0.5, -0.5};
    RngStream rng(7);
    double sum = 0.0;
    constexpr int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        // Proposal: uniform on a box covering the kernel mass.
        double to[2];
        double mean[2];
        q.transition_mean(from, mean);
        for (int d = 0; d < 2; ++d) to[d] = mean[d] + (rng.uniform() - 0.5);
        sum += model.transition_density(0, from, to);
    }
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.01));
    CHECK(*model.transition_density_upper(0) == doctest::Approx(1.0 / (2.0 * M_PI * 0.01)));
}

TEST_CASE("discrete forward-backward matches enumeration")
{
    DiscreteHmm hmm;
    hmm.initial = Eigen::Vector2d(0.6, 0.4);
    hmm.transition.resize(2, 2);
    hmm.transition << 0.7, 0.3, 0.2, 0.8;
    hmm.emissions.resize(2, 2);
    hmm.emissions << 0.9, 0.1, 0.3, 0.6;
    const auto fb = discrete_fb_smooth(hmm, 2);
    const auto en = oracle::enumerate_hmm_paths(hmm, 2);
    CHECK((fb.marginals - en.marginals).cwiseAbs().maxCoeff() < 1e-14);
    for (std::size_t s = 0; s < 2; ++s) CHECK((fb.pairwise[s] - en.pairwise[s]).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(fb.log_normalizer == doctest::Approx(en.log_normalizer).epsilon(1e-14));

    // By hand: P(X0 = 0 | y0) = 0.54 / (0.54 + 0.04); with nothing observed it is the prior.
    CHECK(discrete_fb_smooth(hmm, 0).marginals(0, 0) == doctest::Approx(0.6));
    const auto one = discrete_fb_smooth(hmm, 1);
    CHECK(one.marginals(0, 0) == doctest::Approx(0.54 / 0.58));

    DiscreteHmm flat;
    flat.initial = Eigen::Vector3d::Constant(1.0 / 3);
    flat.transition = Eigen::Matrix3d::Constant(1.0 / 3);
    flat.emissions = Eigen::MatrixXd::Ones(4, 3);
    const auto u = discrete_fb_smooth(flat, 4);
    CHECK((u.marginals.array() - 1.0 / 3).abs().maxCoeff() < 1e-14);

    DiscreteHmm single;
    single.initial = Eigen::VectorXd::Ones(1);
    single.transition = Eigen::MatrixXd::Ones(1, 1);
    single.emissions = Eigen::MatrixXd::Constant(3, 1, 0.5);
    const auto s1 = discrete_fb_smooth(single, 3);
    CHECK(s1.marginals.isOnes());
    CHECK(s1.log_normalizer == doctest::Approx(3 * std::log(0.5)));
}
