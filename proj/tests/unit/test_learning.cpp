#include <cmath>

#include "doctest.h"
#include "smc/error.hpp"
#include "smc/learning/adam.hpp"
#include "smc/learning/family.hpp"
#include "smc/learning/score_ascent.hpp"
#include "smc/models/crnn.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/ppg.hpp"

using namespace smc;
using namespace smc::learning;

namespace {

// log g_s(x) + log m(x, x') under the model built from theta.
double log_joint_term(const ParametricFamily& fam, const Eigen::VectorXd& theta, std::size_t s, State x, State xn)
{
    const auto m = fam.make_model(theta);
    return std::log(m->potential(s, x)) + std::log(m->transition_density(s, x, xn));
}

void check_against_fd(const ParametricFamily& fam, const Eigen::VectorXd& theta, std::size_t s, State x, State xn)
{
    const auto f = fisher_functional(fam, theta);
    Eigen::VectorXd g(static_cast<Eigen::Index>(f->dim()));
    f->term(s, x, xn, {g.data(), f->dim()});
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        Eigen::VectorXd up = theta, down = theta;
        up[i] += h;
        down[i] -= h;
        const double fd = (log_joint_term(fam, up, s, x, xn) - log_joint_term(fam, down, s, x, xn)) / (2 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
}

}  // namespace

TEST_CASE("score functionals are gradients of the log joint term")
{
    const auto p = models::LgssmParams::benchmark();
    const auto t = models::lgssm_simulate(p, 5, RngStream(1));
    const LgssmFamily lg(p, t.observations);
    const double x[] = {0.7}, xn[] = {-0.3};
    check_against_fd(lg, Eigen::Vector2d(0.5, 0.9), 2, x, xn);

    // By hand: d/dA = (x' - A x) x / Q^2 with Q the noise loading.
    const LgssmFamily only_a(p, t.observations, {"A"});
    const auto f = fisher_functional(only_a, Eigen::VectorXd::Constant(1, 0.5));
    double out = 0.0;
    f->term(0, x, xn, {&out, 1});
    CHECK(out == doctest::Approx((-0.3 - 0.5 * 0.7) * 0.7 / 0.36));
    CHECK_THROWS_AS(fisher_functional(only_a, Eigen::Vector2d(0.1, 0.2)), Error);

    auto cp = models::CrnnParams::with_random_weights(2, 2, RngStream(2));
    const auto ct = models::crnn_simulate(cp, 4, RngStream(3));
    const CrnnFamily cf(cp, ct.observations);
    const double cx[] = {0.2, -0.8}, cxn[] = {0.25, -0.7};
    check_against_fd(cf, cf.theta_of(cp), 1, cx, cxn);
}

TEST_CASE("families reject unknown blocks")
{
    const auto p = models::LgssmParams::benchmark();
    const Eigen::MatrixXd y = Eigen::MatrixXd::Zero(1, 3);
    try {
        LgssmFamily bad(p, y, {"Q"});
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnsupportedParameter);
    }
    CHECK_THROWS_AS(LgssmFamily(p, y, {}), Error);
    const LgssmFamily fam(p, y);
    CHECK(fam.param_dim() == 2);
    CHECK(fam.theta_of(fam.params_at(Eigen::Vector2d(0.3, -0.4))) == Eigen::Vector2d(0.3, -0.4));
}

TEST_CASE("the smoothed score functional vanishes at the MLE")
{
    const auto p = models::LgssmParams::benchmark();
    const auto t = models::lgssm_simulate(p, 100, RngStream(4));
    const auto mle = models::lgssm_exact_mle(p, t.observations, 2000, 1e-13).params;
    const LgssmFamily fam(p, t.observations);
    const Eigen::VectorXd theta = fam.theta_of(mle);
    // Expectation of the additive functional under the exact smoothing law.
    const auto sm = models::disturbance_smooth(mle, t.observations, 100);
    const double a = mle.A(0, 0), b = mle.B(0, 0), q2 = mle.state_cov()(0, 0), r2 = mle.obs_cov()(0, 0);
    double da = 0.0, db = 0.0;
    for (std::size_t s = 0; s < 100; ++s) {
        da += (sm.lag_one_moment(s)(0, 0) - a * sm.second_moment(s)(0, 0)) / q2;
        db += (t.observations(0, static_cast<Eigen::Index>(s)) * sm.means[s][0] - b * sm.second_moment(s)(0, 0)) / r2;
    }
    CHECK(std::abs(da) < 1e-5);
    CHECK(std::abs(db) < 1e-5);
    CHECK(theta.size() == 2);
}

TEST_CASE("Adam")
{
    Eigen::VectorXd theta = Eigen::Vector2d(1.0, -1.0);
    auto st = AdamState::fresh(2);
    adam_step(st, theta, Eigen::Vector2d::Zero());
    CHECK(theta == Eigen::Vector2d(1.0, -1.0));

    // A first step moves each coordinate by about the learning rate.
    auto s2 = AdamState::fresh(2);
    Eigen::VectorXd th = Eigen::Vector2d::Zero();
    adam_step(s2, th, Eigen::Vector2d(3.0, -0.01));
    CHECK(th[0] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(th[1] == doctest::Approx(-0.2).epsilon(1e-4));
    CHECK(s2.current_rate() == doctest::Approx(0.2));
    adam_step(s2, th, Eigen::Vector2d(3.0, -0.01));
    CHECK(s2.current_rate() == doctest::Approx(0.2 / std::sqrt(2.0)));

    auto s3 = AdamState::fresh(2);
    Eigen::VectorXd th3 = Eigen::Vector2d::Zero();
    adam_step(s3, th3, Eigen::Vector2d(3.0, -0.01));
    adam_step(s3, th3, Eigen::Vector2d(3.0, -0.01));
    CHECK(th3 == th);

    Eigen::VectorXd before = th3;
    CHECK_THROWS_AS(adam_step(s3, th3, Eigen::Vector2d(NAN, 0.0)), Error);
    CHECK(th3 == before);
    CHECK(s3.step == 2);
    CHECK_THROWS_AS(adam_step(s3, th3, Eigen::VectorXd::Zero(3)), Error);
}

TEST_CASE("gradient estimates")
{
    const auto p = models::LgssmParams::benchmark();
    const auto t = models::lgssm_simulate(p, 20, RngStream(5));
    const LgssmFamily fam(p, t.observations);
    const Eigen::VectorXd theta = Eigen::Vector2d(0.5, 0.5);
    const auto model = fam.make_model(theta);
    const FrozenPath path = initial_path(*model, 20, 16, RngStream(6));

    const auto one = gd_est(fam, theta, path, {16, 2, 1, 0}, {}, RngStream(7));
    REQUIRE(one.retained.size() == 1);
    CHECK(one.gradient == one.retained[0]);
    const auto again = gd_est(fam, theta, path, {16, 2, 1, 0}, {}, RngStream(7));
    CHECK(again.gradient == one.gradient);

    // With every block frozen to zero gradient, score ascent stays put.
    class Frozen final : public ParametricFamily {
    public:
        explicit Frozen(const LgssmFamily& f) : f_(f) {}
        std::size_t param_dim() const override { return f_.param_dim(); }
        std::vector<std::string> param_names() const override { return f_.param_names(); }
        std::size_t num_observations() const override { return f_.num_observations(); }
        std::unique_ptr<StateSpaceModel> make_model(const Eigen::VectorXd& th) const override
        {
            return f_.make_model(th);
        }
        std::unique_ptr<AdditiveFunctional> score_functional(const Eigen::VectorXd&) const override
        {
            return std::make_unique<ZeroFunctional>(f_.param_dim());
        }

    private:
        const LgssmFamily& f_;
    };
    const Frozen frozen(fam);
    ScoreAscentConfig cfg;
    cfg.iterations = 5;
    cfg.rollout = {16, 2, 4, 2};
    const auto run = score_ascent_ppg(frozen, theta, cfg, RngStream(8));
    REQUIRE(run.rows.size() == 6);
    for (const auto& row : run.rows) CHECK(row.theta == theta);
    const auto pg = score_ascent_pg(frozen, theta, cfg, RngStream(9));
    CHECK(pg.final_row().theta == theta);

    CHECK(initial_theta(3, RngStream(10), 0.1) == initial_theta(3, RngStream(10), 0.1));
}
