#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "smc/backward.hpp"
#include "smc/error.hpp"
#include "smc/filter.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/reference.hpp"
#include "smc/smoothing.hpp"
#include "smc/stats.hpp"

using namespace smc;

namespace {

// Two-step table: rows are previous states 0..K-1, x_next is state K.
test::TableModel two_candidates(std::vector<double> g, std::vector<double> dens_to_next, double upper = 10.0)
{
    const auto k = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (Eigen::Index j = 0; j < k; ++j) d(j, k) = dens_to_next[static_cast<std::size_t>(j)];
    g.push_back(1.0);
    return test::TableModel(g, d, upper);
}

}  // namespace

TEST_CASE("backward row probabilities by hand")
{
    {
        const auto m = two_candidates({1.0}, {0.7});
        const auto cloud = test::cloud_of(m, {0});
        const std::vector<double> x{1.0};
        CHECK(backward_row_probs(m, cloud, x) == std::vector<double>{1.0});
    }
    {
        const auto m = two_candidates({1.0, 1.0}, {2.0, 1.0});
        const auto p = backward_row_probs(m, test::cloud_of(m, {0, 1}), std::vector<double>{2.0});
        CHECK(p[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        CHECK(p[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    {
        const auto m = two_candidates({1.0, 3.0}, {4.0, 2.0});
        const auto p = backward_row_probs(m, test::cloud_of(m, {0, 1}), std::vector<double>{2.0});
        CHECK(p[0] == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(p[1] == doctest::Approx(0.6).epsilon(1e-14));
    }
    {
        const auto m = two_candidates({1.0, 1.0}, {0.0, 0.0});
        CHECK_THROWS_AS(backward_row_probs(m, test::cloud_of(m, {0, 1}), std::vector<double>{2.0}), Error);
    }
}

TEST_CASE("backward rows of a filter cloud sum to one")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 20, RngStream(1));
    const models::LgssmModel model(p, data.observations);
    const auto run = pf_run(model, 20, 200, RngStream(2));
    for (std::size_t s = 0; s < 20; s += 5)
        for (std::size_t i = 0; i < 200; i += 37) {
            const auto row = backward_row_probs(model, run.clouds[s], run.clouds[s + 1].particle(i));
            double total = 0;
            for (double x : row) total += x;
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
}

TEST_CASE("backward draws: trivial cases for every sampler")
{
    for (auto kind : {BackwardSamplerKind::Exact, BackwardSamplerKind::AcceptReject, BackwardSamplerKind::Hybrid}) {
        const BackwardSamplerConfig cfg{kind, 0};
        RngStream rng(3);
        const auto one = two_candidates({1.0}, {0.5});
        CHECK(backward_draw(one, test::cloud_of(one, {0}), std::vector<double>{1.0}, cfg, rng) == 0);
        const auto m = two_candidates({1.0, 1.0}, {1.0, 0.0});
        const auto cloud = test::cloud_of(m, {0, 1});
        for (int i = 0; i < 2000; ++i) CHECK(backward_draw(m, cloud, std::vector<double>{2.0}, cfg, rng) == 0);
    }
}

TEST_CASE("accept-reject sampling without a bound is rejected")
{
    const test::TableModel m({1.0, 1.0}, Eigen::MatrixXd::Ones(2, 2));
    CHECK_THROWS_AS(validate(BackwardSamplerConfig{BackwardSamplerKind::AcceptReject, 0}, m), Error);
    CHECK_NOTHROW(validate(BackwardSamplerConfig{BackwardSamplerKind::Exact, 0}, m));
}

TEST_CASE("the three samplers draw from the backward row")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 3, RngStream(4));
    const models::LgssmModel model(p, data.observations);
    const auto run = pf_run(model, 2, 8, RngStream(5));
    const auto x_next = run.clouds[2].particle(0);
    const auto probs = backward_row_probs(model, run.clouds[1], x_next);
    for (auto kind : {BackwardSamplerKind::Exact, BackwardSamplerKind::AcceptReject, BackwardSamplerKind::Hybrid}) {
        // A tiny hybrid cutoff exercises the exact fallback.
        const BackwardSamplerConfig cfg{kind, kind == BackwardSamplerKind::Hybrid ? 2u : 0u};
        RngStream rng(6);
        std::vector<std::size_t> counts(8, 0);
        for (int i = 0; i < 50000; ++i) ++counts[backward_draw(model, run.clouds[1], x_next, cfg, rng)];
        CHECK(stats::chi_square_p_value(counts, probs) > 0.001);
    }
}

TEST_CASE("ffbsm_step by hand on three particles")
{
    Eigen::MatrixXd d(3, 3);
    d << 1.0, 2.0, 0.5, 3.0, 1.0, 1.0, 0.5, 0.5, 2.0;
    const test::TableModel m({1.0, 2.0, 0.5}, d);
    const auto prev = test::cloud_of(m, {0, 1, 2});
    const auto next = test::cloud_of(m, {0, 1, 2}, 1);
    BackwardStats b = BackwardStats::zeros(3, 1);
    b.values << 1.0, -2.0, 4.0;
    const LagOneProduct f(1);
    const auto out = ffbsm_step(m, prev, b, next, f);
    const double g[3] = {1.0, 2.0, 0.5};
    for (int i = 0; i < 3; ++i) {
        double num = 0, den = 0;
        for (int l = 0; l < 3; ++l) {
            const double w = g[l] * d(l, i);
            num += w * (b.values(l, 0) + double(l) * double(i));
            den += w;
        }
        CHECK(out.values(i, 0) == doctest::Approx(num / den).epsilon(1e-12));
    }
    const auto ref = reference::ffbsm_step(m, prev, b, next, f);
    CHECK((out.values - ref.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single particle: ffbsm and paris add the one term")
{
    const test::ConstantModel m(1.5, 1.0);
    const auto prev = test::cloud_of(m, {1.5});
    const auto next = test::cloud_of(m, {2.0}, 1);
    BackwardStats b = BackwardStats::zeros(1, 1);
    b.values(0, 0) = 3.0;
    const LagOneProduct f(1);
    CHECK(ffbsm_step(m, prev, b, next, f).values(0, 0) == 3.0 + 3.0);
    for (std::size_t M : {1u, 3u})
        CHECK(paris_step(m, prev, b, next, f, M, {}, RngStream(7)).values(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("zero functional gives zero statistics")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 10, RngStream(8));
    const models::LgssmModel model(p, data.observations);
    const ZeroFunctional zero(2);
    for (std::size_t M : {1u, 2u, 5u}) CHECK(paris_run(model, 10, 50, M, zero, {}, RngStream(9)).estimate.isZero());
    CHECK(ffbsm_run(model, 10, 50, zero, RngStream(9)).estimate.isZero());
}

TEST_CASE("paris with one particle equals ffbsm with one particle")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 10, RngStream(10));
    const models::LgssmModel model(p, data.observations);
    const LagOneProduct f(1);
    const double a = paris_run(model, 10, 1, 2, f, {}, RngStream(11)).estimate[0];
    const double b = ffbsm_run(model, 10, 1, f, RngStream(11)).estimate[0];
    CHECK(a == doctest::Approx(b).epsilon(1e-12));

    // T = 1, N = 1: the term of the one sampled pair.
    const auto run = pf_run(model, 1, 1, RngStream(12));
    const double x0 = run.clouds[0].particle(0)[0], x1 = run.clouds[1].particle(0)[0];
    CHECK(paris_run(model, 1, 1, 2, f, {}, RngStream(12)).estimate[0] == doctest::Approx(x0 * x1));
}

TEST_CASE("parallel kernels reproduce the serial reference bit for bit")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 20, RngStream(13));
    const models::LgssmModel model(p, data.observations);
    const auto run = pf_run(model, 20, 400, RngStream(14));
    const LagOneProduct f(1);
    BackwardStats b = BackwardStats::zeros(400, 1);
    for (std::size_t s = 0; s < 5; ++s) b = paris_step(model, run.clouds[s], b, run.clouds[s + 1], f, 2, {}, RngStream(15).split(s));
    for (auto kind : {BackwardSamplerKind::Exact, BackwardSamplerKind::AcceptReject, BackwardSamplerKind::Hybrid}) {
        const BackwardSamplerConfig cfg{kind, 0};
        const auto par = paris_step(model, run.clouds[5], b, run.clouds[6], f, 3, cfg, RngStream(16));
        const auto ser = reference::paris_step(model, run.clouds[5], b, run.clouds[6], f, 3, cfg, RngStream(16));
        CHECK(par.values == ser.values);
    }
    const auto par = ffbsm_step(model, run.clouds[5], b, run.clouds[6], f);
    const auto ser = reference::ffbsm_step(model, run.clouds[5], b, run.clouds[6], f);
    CHECK((par.values - ser.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("paris_step averages to ffbsm_step on fixed clouds")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 3, RngStream(17));
    const models::LgssmModel model(p, data.observations);
    const auto run = pf_run(model, 2, 4, RngStream(18));
    const LagOneProduct f(1);
    BackwardStats b = BackwardStats::zeros(4, 1);
    b.values << 0.3, -1.0, 2.0, 0.7;
    const auto exact = ffbsm_step(model, run.clouds[1], b, run.clouds[2], f);
    constexpr int reps = 10000;
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 1), sq = Eigen::MatrixXd::Zero(4, 1);
    for (int r = 0; r < reps; ++r) {
        const auto v = paris_step(model, run.clouds[1], b, run.clouds[2], f, 2, {}, RngStream(19).split(std::uint64_t(r))).values;
        sum += v;
        sq += v.cwiseProduct(v);
    }
    for (int i = 0; i < 4; ++i) {
        const double mean = sum(i, 0) / reps;
        const double se = std::sqrt((sq(i, 0) / reps - mean * mean) / (reps - 1));
        CHECK(std::abs(mean - exact.values(i, 0)) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("ffbsm_run is unbiased on the LGSSM and less variable than paris")
{
    const auto p = models::LgssmParams::benchmark();
    constexpr std::size_t horizon = 100;
    const auto data = models::lgssm_simulate(p, horizon, RngStream(20));
    const models::LgssmModel model(p, data.observations);
    const double exact = models::disturbance_smooth(p, data.observations, horizon).lag_one_sum()(0, 0);
    const LagOneProduct f(1);
    std::vector<double> fb, pr;
    for (std::uint64_t r = 0; r < 100; ++r) {
        fb.push_back(ffbsm_run(model, horizon, 200, f, RngStream(21).split(r)).estimate[0]);
        pr.push_back(paris_run(model, horizon, 200, 2, f, {}, RngStream(22).split(r)).estimate[0]);
    }
    const auto sf = stats::summarize(fb);
    const auto sp = stats::summarize(pr);
    CHECK(std::abs(sf.mean - exact) < 3.0 * sf.standard_error);
    CHECK(sf.variance < sp.variance);
}

TEST_CASE("paris variance does not grow with M")
{
    const auto p = models::LgssmParams::benchmark();
    constexpr std::size_t horizon = 50;
    const auto data = models::lgssm_simulate(p, horizon, RngStream(23));
    const models::LgssmModel model(p, data.observations);
    const LagOneProduct f(1);
    constexpr std::size_t reps = 500;
    std::vector<double> variances;
    for (std::size_t M : {1u, 2u, 4u, 8u}) {
        std::vector<double> est;
        for (std::uint64_t r = 0; r < reps; ++r) est.push_back(paris_run(model, horizon, 50, M, f, {}, RngStream(24).split(r)).estimate[0]);
        variances.push_back(stats::summarize(est).variance);
    }
    // Log-variance ratios have sd about sqrt(4 / reps).
    const double slack = std::exp(3.0 * std::sqrt(4.0 / reps));
    for (std::size_t i = 1; i < variances.size(); ++i) CHECK(variances[i] <= variances[i - 1] * slack);
    CHECK(variances.back() < variances.front());
}

TEST_CASE("paris with M = 2 and M = 3 is unbiased on the LGSSM")
{
    const auto p = models::LgssmParams::benchmark();
    constexpr std::size_t horizon = 50;
    const auto data = models::lgssm_simulate(p, horizon, RngStream(25));
    const models::LgssmModel model(p, data.observations);
    const double exact = models::disturbance_smooth(p, data.observations, horizon).lag_one_sum()(0, 0);
    const LagOneProduct f(1);
    for (std::size_t M : {2u, 3u}) {
        std::vector<double> est;
        for (std::uint64_t r = 0; r < 200; ++r) est.push_back(paris_run(model, horizon, 200, M, f, {}, RngStream(26 + M).split(r)).estimate[0]);
        const auto s = stats::summarize(est);
        CHECK(std::abs(s.mean - exact) < 3.0 * s.standard_error);
    }
}
