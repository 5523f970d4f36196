#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "smc/cli/commands.hpp"
#include "smc/error.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/observations_csv.hpp"

namespace smc::cli {

namespace {

// A list of one value is that value times the identity; otherwise row-major.
Eigen::MatrixXd matrix_param(const Config& cfg, const std::string& key, Eigen::Index rows, Eigen::Index cols,
                             double fallback)
{
    const auto values = cfg.get_doubles(key, {fallback});
    if (values.size() == 1) return values[0] * Eigen::MatrixXd::Identity(rows, cols);
    if (values.size() != static_cast<std::size_t>(rows * cols))
        fail(Errc::ConfigError, fmt::format("{} needs 1 or {}x{} values, got {}", key, rows, cols, values.size()));
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
    return m;
}

Eigen::MatrixXd observations_or_simulate(const Config& cfg, Eigen::Index obs_dim,
                                          const std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(std::size_t)>&
                                              simulate,
                                          Eigen::MatrixXd& states)
{
    const auto length = cfg.get_size("model.T", 200);
    if (const auto path = cfg.find("model.data")) {
        Eigen::MatrixXd y = models::read_observations_csv(std::filesystem::path(*path));
        if (y.rows() != obs_dim)
            fail(Errc::ConfigError, fmt::format("{} has {} columns, the model expects {}", *path, y.rows(), obs_dim));
        return y;
    }
    if (length < 1) fail(Errc::ConfigError, "model.T must be at least 1");
    auto [x, y] = simulate(length);
    states = std::move(x);
    return y;
}

}  // namespace

ModelSetup build_model(const Config& cfg, const RngStream& data_stream)
{
    ModelSetup setup;
    setup.kind = cfg.get_choice("model.kind", "lgssm", {"lgssm", "crnn", "discrete"});

    if (setup.kind == "lgssm") {
        const auto bench = models::LgssmParams::benchmark();
        const auto dx = static_cast<Eigen::Index>(cfg.get_size("model.dim", 1));
        const auto dy = static_cast<Eigen::Index>(cfg.get_size("model.obs_dim", static_cast<std::size_t>(dx)));
        if (dx < 1 || dy < 1) fail(Errc::ConfigError, "model.dim and model.obs_dim must be positive");
        models::LgssmParams p;
        p.A = matrix_param(cfg, "model.A", dx, dx, bench.A(0, 0));
        p.Q = matrix_param(cfg, "model.Q", dx, dx, bench.Q(0, 0));
        p.B = matrix_param(cfg, "model.B", dy, dx, bench.B(0, 0));
        p.R = matrix_param(cfg, "model.R", dy, dy, bench.R(0, 0));
        p.init_mean = Eigen::VectorXd::Zero(dx);
        p.init_cov = cfg.get_double("model.init_var", 1.0) * Eigen::MatrixXd::Identity(dx, dx);
        try {
            p.validate_shapes();
        } catch (const Error& e) {
            fail(Errc::ConfigError, e.what());
        }
        setup.observations = observations_or_simulate(
            cfg, dy,
            [&](std::size_t n) {
                auto t = models::lgssm_simulate(p, n, data_stream);
                return std::pair{t.states, t.observations};
            },
            setup.states);
        setup.model = std::make_unique<models::LgssmModel>(p, setup.observations);
        setup.lgssm = std::move(p);
    } else if (setup.kind == "crnn") {
        const auto dim = cfg.get_size("model.dim", 5);
        const auto obs_dim = cfg.get_size("model.obs_dim", dim);
        if (dim < 1 || obs_dim < 1) fail(Errc::ConfigError, "model.dim and model.obs_dim must be positive");
        auto p = models::CrnnParams::with_random_weights(dim, obs_dim, data_stream.split(1));
        p.tau = cfg.get_double("model.tau", p.tau);
        p.delta = cfg.get_double("model.delta", p.delta);
        p.gamma = cfg.get_double("model.gamma", p.gamma);
        p.state_noise_var = cfg.get_double("model.state_noise_var", p.state_noise_var);
        p.obs_scale = cfg.get_double("model.obs_scale", p.obs_scale);
        p.obs_df = cfg.get_double("model.obs_df", p.obs_df);
        p.init_var = cfg.get_double("model.init_var", p.init_var);
        try {
            p.validate();
        } catch (const Error& e) {
            fail(Errc::ConfigError, e.what());
        }
        setup.observations = observations_or_simulate(
            cfg, static_cast<Eigen::Index>(obs_dim),
            [&](std::size_t n) {
                auto t = models::crnn_simulate(p, n, data_stream.split(2));
                return std::pair{t.states, t.observations};
            },
            setup.states);
        setup.model = std::make_unique<models::CrnnModel>(p, setup.observations);
        setup.crnn = std::move(p);
    } else {
        models::DiscreteHmm hmm;
        const auto trans = cfg.get_doubles("model.transition", {0.8, 0.1, 0.1, 0.1, 0.8, 0.1, 0.1, 0.1, 0.8});
        const auto k = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(trans.size()))));
        if (k < 1 || static_cast<std::size_t>(k * k) != trans.size())
            fail(Errc::ConfigError, "model.transition must hold K*K values");
        hmm.transition.resize(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) hmm.transition(i, j) = trans[static_cast<std::size_t>(i * k + j)];
        const auto init = cfg.get_doubles("model.initial", std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
        if (static_cast<Eigen::Index>(init.size()) != k) fail(Errc::ConfigError, "model.initial must hold K values");
        hmm.initial = Eigen::Map<const Eigen::VectorXd>(init.data(), k);
        hmm.emissions.resize(0, k);

        if (cfg.has("model.emissions")) {
            const auto em = cfg.get_doubles("model.emissions", {});
            if (em.empty() || em.size() % static_cast<std::size_t>(k) != 0)
                fail(Errc::ConfigError, "model.emissions must hold T*K values");
            const auto t = static_cast<Eigen::Index>(em.size()) / k;
            hmm.emissions.resize(t, k);
            for (Eigen::Index s = 0; s < t; ++s)
                for (Eigen::Index j = 0; j < k; ++j) hmm.emissions(s, j) = em[static_cast<std::size_t>(s * k + j)];
        } else {
            // Noisy indicator of a simulated hidden chain.
            const auto length = cfg.get_size("model.T", 50);
            const double hit = cfg.get_double("model.hit_likelihood", 0.7);
            if (length < 1) fail(Errc::ConfigError, "model.T must be at least 1");
            try {
                hmm.validate();
            } catch (const Error& e) {
                fail(Errc::ConfigError, e.what());
            }
            const models::DiscreteHmmModel prior(hmm);
            const Eigen::MatrixXd chain = prior_path(prior, length - 1, data_stream);
            hmm.emissions = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(length), k, (1.0 - hit) / std::max<Eigen::Index>(k - 1, 1));
            for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(length); ++s)
                hmm.emissions(s, static_cast<Eigen::Index>(chain(0, s))) = hit;
            setup.states = chain;
        }
        try {
            hmm.validate();
        } catch (const Error& e) {
            fail(Errc::ConfigError, e.what());
        }
        setup.observations = Eigen::MatrixXd::Zero(1, hmm.emissions.rows());
        setup.model = std::make_unique<models::DiscreteHmmModel>(hmm);
        setup.hmm = std::move(hmm);
    }
    return setup;
}

std::optional<Eigen::VectorXd> exact_reference(const ModelSetup& setup, const std::string& functional)
{
    const auto dim = static_cast<Eigen::Index>(setup.model->state_dim());
    if (functional == "zero") return Eigen::VectorXd::Zero(1);
    if (setup.lgssm) {
        const auto sm = models::disturbance_smooth(*setup.lgssm, setup.observations, setup.horizon());
        const Eigen::MatrixXd sum = sm.lag_one_sum();
        return Eigen::VectorXd(sum.reshaped());
    }
    if (setup.hmm) {
        const auto sm = models::discrete_fb_smooth(*setup.hmm, setup.horizon());
        double total = 0.0;
        for (const auto& pair : sm.pairwise)
            for (Eigen::Index x = 0; x < pair.rows(); ++x)
                for (Eigen::Index y = 0; y < pair.cols(); ++y)
                    total += pair(x, y) * static_cast<double>(x) * static_cast<double>(y);
        return Eigen::VectorXd::Constant(dim * dim, total);
    }
    return std::nullopt;
}

Eigen::MatrixXd prior_path(const StateSpaceModel& model, std::size_t horizon, RngStream rng)
{
    const std::size_t dim = model.state_dim();
    Eigen::MatrixXd path(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(horizon + 1));
    model.init_sample(rng, {path.data(), dim});
    for (std::size_t s = 1; s <= horizon; ++s)
        model.transition_sample(s - 1, {path.data() + (s - 1) * dim, dim}, rng, {path.data() + s * dim, dim});
    return path;
}

std::string num(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

}  // namespace smc::cli
