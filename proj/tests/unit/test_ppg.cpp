#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "smc/acceptance/oracles.hpp"
#include "smc/error.hpp"
#include "smc/mixing.hpp"
#include "smc/models/discrete_hmm.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/ppg.hpp"
#include "smc/smoothing.hpp"
#include "smc/stats.hpp"

using namespace smc;

namespace {

models::LgssmModel small_lgssm(std::size_t n_obs, std::uint64_t seed)
{
    const auto p = models::LgssmParams::benchmark();
    return models::LgssmModel(p, models::lgssm_simulate(p, n_obs, RngStream(seed)).observations);
}

std::size_t count_equal(const ParticleCloud& c, double v)
{
    std::size_t k = 0;
    for (std::size_t i = 0; i < c.size(); ++i) k += c.particle(i)[0] == v;
    return k;
}

}  // namespace

TEST_CASE("cpf_init places the conditional state once, at a uniform slot")
{
    const test::ConstantModel point(1.0, 1.0);
    const std::vector<double> z{-3.0};
    const auto single = cpf_init(point, 1, z, RngStream(1));
    CHECK(single.cloud.particle(0)[0] == -3.0);

    const auto c = cpf_init(point, 5, z, RngStream(2));
    CHECK(count_equal(c.cloud, -3.0) == 1);
    CHECK(count_equal(c.cloud, 1.0) == 4);
    CHECK(c.cloud.particle(c.slot)[0] == -3.0);

    std::vector<std::size_t> counts(4, 0);
    const RngStream root(3);
    for (std::uint64_t r = 0; r < 100000; ++r) ++counts[cpf_init(point, 4, z, root.split(r)).slot];
    for (auto k : counts) CHECK(std::abs(static_cast<double>(k) / 1e5 - 0.25) < 0.01);

    CHECK(cpf_init(point, 4, z, RngStream(4), SlotPlacement::First).slot == 0);
}

TEST_CASE("cpf_step pins the conditional state and resamples the rest")
{
    const auto model = small_lgssm(5, 5);
    const std::vector<double> z{0.123456789};
    const auto one = cpf_step(model, cpf_init(model, 1, z, RngStream(6)).cloud, z, RngStream(7));
    CHECK(one.next.particle(0)[0] == z[0]);

    const auto start = cpf_init(model, 50, z, RngStream(8));
    const auto step = cpf_step(model, start.cloud, z, RngStream(9));
    CHECK(count_equal(step.next, z[0]) == 1);
    CHECK(step.ancestors[step.slot] == kNoAncestor);
    CHECK(step.next.particle(step.slot)[0] == z[0]);

    // Free particles select ancestors in proportion to the potentials.
    const test::TableModel tm({1.0, 2.0, 3.0, 4.0}, Eigen::MatrixXd::Ones(4, 4));
    const auto cloud = test::cloud_of(tm, {0, 1, 2, 3});
    std::vector<std::size_t> counts(4, 0);
    const std::vector<double> pinned{0.0};
    for (std::uint64_t r = 0; r < 34000; ++r) {
        const auto s = cpf_step(tm, cloud, pinned, RngStream(10).split(r));
        for (std::size_t i = 0; i < 4; ++i)
            if (i != s.slot) ++counts[s.ancestors[i]];
    }
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    CHECK(stats::chi_square_p_value(counts, p) > 0.001);
}

TEST_CASE("conditional PaRIS with one particle follows the conditioning path")
{
    const test::ConstantModel m(0.0, 1.0);
    const LagOneProduct f(1);
    const std::vector<double> z0{0.5}, z1{2.0}, z2{-1.0};
    auto st = cond_paris_start(m, 1, z0, 1, RngStream(11));
    st = cond_paris_update(m, std::move(st), z1, f, 2, {}, {RngStream(12), RngStream(13)});
    st = cond_paris_update(m, std::move(st), z2, f, 2, {}, {RngStream(14), RngStream(15)});
    const Eigen::MatrixXd path = st.path(0);
    REQUIRE(path.cols() == 3);
    CHECK(path(0, 0) == 0.5);
    CHECK(path(0, 1) == 2.0);
    CHECK(path(0, 2) == -1.0);
    CHECK(st.stats.values(0, 0) == doctest::Approx(0.5 * 2.0 + 2.0 * -1.0));
}

TEST_CASE("conditional PaRIS with a zero functional still extends paths")
{
    const auto model = small_lgssm(4, 16);
    const ZeroFunctional zero(1);
    const std::vector<double> z{0.0};
    auto st = cond_paris_start(model, 10, z, 1, RngStream(17));
    for (std::uint64_t s = 0; s < 3; ++s)
        st = cond_paris_update(model, std::move(st), z, zero, 2, {}, {RngStream(18).split(s), RngStream(19).split(s)});
    CHECK(st.stats.values.isZero());
    CHECK(st.path(3).cols() == 4);
}

TEST_CASE("conditional PaRIS statistics average to the FFBSm update")
{
    const auto model = small_lgssm(4, 20);
    const LagOneProduct f(1);
    const std::vector<double> z0{0.2}, z1{-0.4};
    const auto start = cond_paris_start(model, 3, z0, 1, RngStream(21));
    // The filter stream is fixed so every replicate sees the same next cloud.
    const RngStream filter(22);
    const auto probe = cond_paris_update(model, start, z1, f, 2, {}, {filter, RngStream(23)});
    const auto exact = ffbsm_step(model, start.clouds.back(), start.stats, probe.clouds.back(), f);
    constexpr int reps = 10000;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero(), sq = Eigen::Vector3d::Zero();
    for (int r = 0; r < reps; ++r) {
        const auto next = cond_paris_update(model, start, z1, f, 2, {}, {filter, RngStream(24).split(std::uint64_t(r))});
        const Eigen::Vector3d v = next.stats.values.col(0);
        sum += v;
        sq += v.cwiseProduct(v);
    }
    for (int i = 0; i < 3; ++i) {
        const double mean = sum[i] / reps;
        const double se = std::sqrt(std::max(0.0, sq[i] / reps - mean * mean) / (reps - 1));
        CHECK(std::abs(mean - exact.values(i, 0)) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("ppg_iteration structure")
{
    const auto model = small_lgssm(8, 25);
    const LagOneProduct f(1);
    const FrozenPath path = initial_path(model, 8, 20, RngStream(26));

    // One particle: the kernel returns the conditioning path.
    const auto single = ppg_iteration(model, path, 1, 2, f, {}, RngStream(27));
    CHECK(single.new_path.states == path.states);

    const auto it = ppg_iteration(model, path, 16, 2, f, {}, RngStream(28));
    CHECK(it.estimate.isApprox(it.system.stats.mean()));
    CHECK(it.new_path.states == it.system.path(it.selected));
    for (std::size_t s = 0; s <= 8; ++s) {
        const auto& cloud = it.system.clouds[s];
        CHECK(cloud.particle(it.system.slots[s])[0] == path.states(0, static_cast<Eigen::Index>(s)));
    }
    const ZeroFunctional zero(1);
    CHECK(ppg_iteration(model, path, 16, 2, zero, {}, RngStream(29)).estimate.isZero());
}

TEST_CASE("roll-out averaging")
{
    std::vector<Eigen::VectorXd> per(4, Eigen::VectorXd(1));
    for (int i = 0; i < 4; ++i) per[static_cast<std::size_t>(i)][0] = i + 1.0;
    CHECK(rollout_average(per, 2)[0] == 3.5);
    CHECK(rollout_average(per, 3)[0] == 4.0);
    std::vector<Eigen::VectorXd> same(5, Eigen::VectorXd::Constant(2, 1.25));
    CHECK(rollout_average(same, 1) == Eigen::VectorXd::Constant(2, 1.25));

    const auto model = small_lgssm(10, 30);
    const LagOneProduct f(1);
    const auto res = ppg_run(model, initial_path(model, 10, 16, RngStream(31)), {16, 2, 6, 3}, f, {}, RngStream(32));
    REQUIRE(res.per_iteration.size() == 6);
    const double mean = (res.per_iteration[3][0] + res.per_iteration[4][0] + res.per_iteration[5][0]) / 3.0;
    CHECK(res.rollout_estimate[0] == doctest::Approx(mean).epsilon(1e-15));
    CHECK_THROWS_AS(validate(RolloutConfig{16, 2, 4, 4}), Error);
    CHECK(default_burn_in(9) == 4);
}

TEST_CASE("pgas with one particle returns the conditioning path")
{
    const auto model = small_lgssm(6, 33);
    const FrozenPath path = initial_path(model, 6, 10, RngStream(34));
    CHECK(pgas_iteration(model, path, 1, RngStream(35)).states == path.states);
}

TEST_CASE("both Gibbs kernels keep a small HMM's smoothing law")
{
    models::DiscreteHmm hmm;
    hmm.initial = Eigen::Vector3d(0.5, 0.3, 0.2);
    hmm.transition.resize(3, 3);
    hmm.transition << 0.7, 0.2, 0.1, 0.2, 0.6, 0.2, 0.1, 0.3, 0.6;
    hmm.emissions.resize(3, 3);
    hmm.emissions << 0.9, 0.2, 0.1, 0.1, 0.7, 0.3, 0.3, 0.3, 0.8;
    const models::DiscreteHmmModel model(hmm);
    constexpr std::size_t horizon = 3;
    const auto exact = models::discrete_fb_smooth(hmm, horizon);
    const LagOneProduct f(1);
    constexpr std::size_t iters = 20000;
    for (int kernel = 0; kernel < 2; ++kernel) {
        RngStream init(36);
        FrozenPath path{oracle::sample_hmm_smoothing_path(hmm, horizon, init)};
        Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(horizon + 1, 3);
        const RngStream root(37 + static_cast<std::uint64_t>(kernel));
        for (std::size_t l = 0; l < iters; ++l) {
            path = kernel == 0 ? ppg_iteration(model, path, 4, 2, f, {BackwardSamplerKind::Exact, 0}, root.split(l)).new_path
                               : pgas_iteration(model, path, 4, root.split(l));
            for (std::size_t s = 0; s <= horizon; ++s)
                counts(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(path.states(0, static_cast<Eigen::Index>(s)))) += 1;
        }
        counts /= static_cast<double>(iters);
        for (Eigen::Index s = 0; s <= static_cast<Eigen::Index>(horizon); ++s)
            CHECK(0.5 * (counts.row(s) - exact.marginals.row(s)).cwiseAbs().sum() < 0.03);
    }
}

TEST_CASE("rho bounds")
{
    const std::vector<Bounds> ones(3, {1.0, 1.0});
    CHECK(rho_bound(ones, ones, 2) == 1.0);
    const std::vector<Bounds> g(3, {1.0, 2.0}), m(3, {1.0, 3.0});
    CHECK(rho_bound(g, m, 2) == 6.0);
    const std::vector<Bounds> gv{{1.0, 1.0}, {1.0, 4.0}, {1.0, 2.0}};
    CHECK(rho_bound(gv, ones, 2) == 4.0);
    CHECK(rho_bound(gv, ones, 0) == 1.0);
    const std::vector<Bounds> bad{{0.0, 1.0}};
    const std::vector<Bounds> inverted{{2.0, 1.0}};
    CHECK_THROWS_AS(rho_bound(bad, bad, 0), Error);
    CHECK_THROWS_AS(rho_bound(inverted, inverted, 0), Error);
}

TEST_CASE("kappa rate")
{
    const auto d = kappa_rate(1.0, 100, 1);
    CHECK(d.kappa == doctest::Approx(1.0 - 0.965 / 1.12).epsilon(1e-12));
    CHECK(d.n_min == 4);
    CHECK_FALSE(d.below_threshold);
    CHECK(kappa_rate(1.0, 1000000000, 1).kappa < 1e-6);
    double prev = 1.0;
    for (std::size_t n : {8u, 16u, 32u}) {
        const double k = kappa_rate(1.0, n, 1).kappa;
        CHECK(k > 0.0);
        CHECK(k < prev);
        prev = k;
    }
    CHECK(kappa_rate(1.0, 4, 1).below_threshold);
    CHECK_THROWS_AS(kappa_rate_checked(1.0, 3, 1), Error);
    CHECK_NOTHROW(kappa_rate_checked(1.0, 5, 1));
}
