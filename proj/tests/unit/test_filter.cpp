#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "smc/error.hpp"
#include "smc/filter.hpp"
#include "smc/functional.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/reference.hpp"
#include "smc/stats.hpp"

using namespace smc;

TEST_CASE("pf_init: point mass, single particle and the standard normal mean")
{
    const test::ConstantModel point(2.5, 1.0);
    const auto cloud = pf_init(point, 16, RngStream(1));
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(cloud.particle(i)[0] == 2.5);
    CHECK(pf_init(point, 1, RngStream(1)).size() == 1);

    auto p = models::LgssmParams::scalar(0.9, 1.0, 1.0, 1.0);
    p.A = Eigen::MatrixXd::Identity(2, 2);
    p.Q = Eigen::MatrixXd::Identity(2, 2);
    p.B = Eigen::MatrixXd::Identity(2, 2);
    p.R = Eigen::MatrixXd::Identity(2, 2);
    p.init_mean = Eigen::VectorXd::Zero(2);
    p.init_cov = Eigen::MatrixXd::Identity(2, 2);
    const models::LgssmModel model(p, Eigen::MatrixXd::Zero(2, 3));
    constexpr std::size_t n = 100000;
    const auto big = pf_init(model, n, RngStream(2));
    const Eigen::VectorXd mean = big.particles().rowwise().mean();
    CHECK(mean.cwiseAbs().maxCoeff() < 4.0 / std::sqrt(double(n)));
    for (std::size_t i = 0; i < 50; ++i) CHECK(big.potentials()[i] == doctest::Approx(model.potential(0, big.particle(i))));
}

TEST_CASE("pf_step: ancestors follow the potentials")
{
    Eigen::MatrixXd dens = Eigen::MatrixXd::Constant(3, 3, 1.0);
    const test::TableModel tm({1.0, 0.0, 0.0}, dens);
    const auto cloud = test::cloud_of(tm, {0, 1, 2});
    const auto step = pf_step(tm, cloud, RngStream(3));
    for (auto a : step.ancestors) CHECK(a == 0);
    CHECK(step.next.time_index() == 1);

    const test::ConstantModel single(0.0, 1.0);
    const auto one = pf_step(single, pf_init(single, 1, RngStream(4)), RngStream(5));
    CHECK(one.ancestors[0] == 0);

    // Constant potential: uniform ancestors.
    const test::ConstantModel flat(0.0, 0.3);
    const auto c4 = pf_init(flat, 4, RngStream(6));
    std::vector<std::size_t> counts(4, 0);
    for (std::uint64_t r = 0; r < 25000; ++r)
        for (auto a : pf_step(flat, c4, RngStream(7).split(r)).ancestors) ++counts[a];
    const std::vector<double> p(4, 0.25);
    CHECK(stats::chi_square_p_value(counts, p) > 0.001);
}

TEST_CASE("a cloud with zero total potential is an error")
{
    const test::TableModel tm({0.0, 0.0}, Eigen::MatrixXd::Ones(2, 2));
    CHECK_THROWS_AS(test::cloud_of(tm, {0, 1}), Error);
}

TEST_CASE("genealogy_update by hand")
{
    const test::TableModel tm({1.0, 1.0, 1.0}, Eigen::MatrixXd::Ones(3, 3));
    const auto prev = test::cloud_of(tm, {1.0, 2.0, 3.0});
    const auto next = test::cloud_of(tm, {0.5, 1.5, 2.5}, 1);
    BackwardStats b = BackwardStats::zeros(3, 1);
    b.values << 10.0, 20.0, 30.0;
    const LagOneProduct f(1);
    const std::vector<std::size_t> anc{1, 0, 1};
    const auto out = genealogy_update(b, anc, f, prev, next);
    CHECK(out.values(0, 0) == 20.0 + 2.0 * 0.5);
    CHECK(out.values(1, 0) == 10.0 + 1.0 * 1.5);
    CHECK(out.values(2, 0) == 20.0 + 2.0 * 2.5);

    const ZeroFunctional zero(1);
    const auto z = genealogy_update(BackwardStats::zeros(3, 1), anc, zero, prev, next);
    CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pf_loglik with a constant potential is exact")
{
    const test::ConstantModel flat(0.0, 0.3);
    const auto est = pf_loglik(flat, 10, 50, RngStream(8));
    CHECK(est.value == doctest::Approx(11.0 * std::log(0.3)).epsilon(1e-12));
    CHECK_FALSE(est.collapsed);

    // N = 1: log of the product of the single particle's potentials.
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 6, RngStream(9));
    const models::LgssmModel model(p, data.observations);
    const auto run = pf_run(model, 5, 1, RngStream(10));
    double expected = 0.0;
    for (const auto& c : run.clouds) expected += std::log(c.potentials()[0]);
    CHECK(pf_loglik(model, 5, 1, RngStream(10)).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("pf_loglik collapse is flagged")
{
    const test::TableModel tm({1.0, 0.0}, (Eigen::MatrixXd(2, 2) << 0.0, 1.0, 0.0, 1.0).finished());
    const auto est = pf_loglik(tm, 3, 10, RngStream(11));
    CHECK(est.collapsed);
    CHECK(std::isinf(est.value));
}

TEST_CASE("filter runs are deterministic and match the serial kernel")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 30, RngStream(12));
    const models::LgssmModel model(p, data.observations);
    const auto a = pf_run(model, 30, 300, RngStream(13));
    const auto b = pf_run(model, 30, 300, RngStream(13));
    for (std::size_t s = 0; s <= 30; ++s) CHECK(a.clouds[s].particles() == b.clouds[s].particles());

    const auto& cloud = a.clouds[10];
    const auto par = pf_step(model, cloud, RngStream(14));
    const auto ser = reference::pf_step(model, cloud, RngStream(14));
    CHECK(par.ancestors == ser.ancestors);
    CHECK(par.next.particles() == ser.next.particles());
}

TEST_CASE("genealogies collapse when T is much larger than N")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 500, RngStream(15));
    const models::LgssmModel model(p, data.observations);
    constexpr int seeds = 20;
    int collapsed = 0;
    for (int r = 0; r < seeds; ++r) {
        const auto run = pf_run(model, 500, 100, RngStream(16).split(static_cast<std::uint64_t>(r)));
        std::set<std::size_t> roots;
        for (std::size_t i = 0; i < 100; ++i) {
            std::size_t j = i;
            for (std::size_t s = 500; s-- > 0;) j = run.ancestors[s][j];
            roots.insert(j);
        }
        collapsed += roots.size() <= 5;
    }
    CHECK(collapsed >= 19);
}

TEST_CASE("exp(pf_loglik) is unbiased for the likelihood")
{
    const auto p = models::LgssmParams::benchmark();
    const auto data = models::lgssm_simulate(p, 10, RngStream(17));
    const models::LgssmModel model(p, data.observations);
    const double exact = models::kalman_filter(p, data.observations).loglik;
    std::vector<double> ratios;
    for (std::uint64_t r = 0; r < 400; ++r) ratios.push_back(std::exp(pf_loglik(model, 9, 200, RngStream(18).split(r)).value - exact));
    const auto s = stats::summarize(ratios);
    CHECK(std::abs(s.mean - 1.0) < 3.0 * s.standard_error);
}
