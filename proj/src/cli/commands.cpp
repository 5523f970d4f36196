#include "smc/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "json.hpp"
#include "smc/acceptance/criteria.hpp"
#include "smc/error.hpp"
#include "smc/filter.hpp"
#include "smc/functional.hpp"
#include "smc/learning/family.hpp"
#include "smc/learning/score_ascent.hpp"
#include "smc/mixing.hpp"
#include "smc/models/kalman.hpp"
#include "smc/models/observations_csv.hpp"
#include "smc/parallel.hpp"
#include "smc/ppg.hpp"
#include "smc/smoothing.hpp"
#include "smc/stats.hpp"

namespace smc::cli {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void preamble(std::ostream& out, std::string_view command, const Config& cfg, std::uint64_t seed)
{
    out << fmt::format("# smc {} config_hash={:016x} seed={}\n", command, cfg.hash(), seed);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << fields[i];
    }
    out << '\n';
}

BackwardSamplerConfig sampler_config(const Config& cfg)
{
    BackwardSamplerConfig s;
    const auto kind = cfg.get_choice("sampler.kind", "hybrid", {"exact", "accept_reject", "hybrid"});
    s.kind = kind == "exact" ? BackwardSamplerKind::Exact
             : kind == "accept_reject" ? BackwardSamplerKind::AcceptReject
                                       : BackwardSamplerKind::Hybrid;
    s.max_trials = cfg.get_size("sampler.max_trials", 0);
    return s;
}

std::unique_ptr<AdditiveFunctional> make_functional(const std::string& name, std::size_t state_dim)
{
    if (name == "zero") return std::make_unique<ZeroFunctional>(1);
    return std::make_unique<LagOneProduct>(state_dim);
}

std::string error_code(const std::exception_ptr& e)
{
    try {
        std::rethrow_exception(e);
    } catch (const Error& err) {
        return std::string(to_string(err.code()));
    } catch (...) {
        return "Unknown";
    }
}

// Shared by smooth and bias-k0: one estimate per replicate, failures kept.
struct ReplicateResult {
    std::vector<double> values;
    bool failed = false;
    std::string code;
    double wall_ms = 0.0;
};

template <class Fn>
std::vector<ReplicateResult> run_replicates(std::size_t count, Fn&& fn)
{
    std::vector<ReplicateResult> results(count);
    parallel_for(
        count,
        [&](std::size_t r) {
            const auto start = Clock::now();
            try {
                results[r].values = fn(r);
            } catch (const Error&) {
                results[r].failed = true;
                results[r].code = error_code(std::current_exception());
            }
            results[r].wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        },
        1);
    return results;
}

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(Errc::ConfigError, fmt::format("cannot open {} for writing", path.string()));
    return out;
}

// ---------------------------------------------------------------- smooth

struct SmoothCell {
    std::string algorithm;
    std::size_t n, m, k, k0;
};

Eigen::VectorXd smooth_once(const SmoothCell& c, const StateSpaceModel& model, std::size_t horizon,
                            const AdditiveFunctional& f, const BackwardSamplerConfig& sampler, const RngStream& rng)
{
    if (c.algorithm == "paris") return paris_run(model, horizon, c.n, c.m, f, sampler, rng).estimate;
    if (c.algorithm == "ffbsm") return ffbsm_run(model, horizon, c.n, f, rng).estimate;
    const FrozenPath init = initial_path(model, horizon, c.n, rng.split(Phase::Init));
    if (c.algorithm == "ppg") return ppg_run(model, init, {c.n, c.m, c.k, c.k0}, f, sampler, rng).rollout_estimate;
    FrozenPath path = init;
    const RngStream moves = rng.split(Phase::Iteration);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.dim()));
    for (std::size_t l = 1; l <= c.k; ++l) {
        path = pgas_iteration(model, path, c.n, moves.split(l));
        if (l > c.k0) acc += f.evaluate_path(path.states);
    }
    return acc / static_cast<double>(c.k - c.k0);
}

std::vector<SmoothCell> smooth_cells(const Config& cfg, const std::string& algorithm)
{
    const auto m = cfg.get_size("algorithm.M", 2);
    const bool has_c = cfg.has("algorithm.C");
    const auto budget = cfg.get_size("algorithm.C", 0);
    const bool has_n = cfg.has("algorithm.N");
    const auto n_fixed = cfg.get_size("algorithm.N", 500);
    if (m < 1) fail(Errc::ConfigError, "algorithm.M must be at least 1");

    if (algorithm == "paris" || algorithm == "ffbsm") {
        std::size_t n = n_fixed;
        if (has_c) {
            if (has_n && n_fixed != budget)
                fail(Errc::ConfigError, fmt::format("algorithm.N={} contradicts algorithm.C={}", n_fixed, budget));
            n = budget;
        }
        if (n < 1) fail(Errc::ConfigError, "algorithm.N must be at least 1");
        return {{algorithm, n, m, 1, 0}};
    }
    const auto ks = cfg.get_sizes("algorithm.k", {10});
    const bool has_k0 = cfg.has("algorithm.k0");
    std::vector<std::size_t> k0s;
    for (auto k : ks) k0s.push_back(default_burn_in(k));
    k0s = cfg.get_sizes("algorithm.k0", k0s);
    if (k0s.size() != ks.size()) {
        if (has_k0 && k0s.size() == 1)
            k0s.assign(ks.size(), k0s[0]);
        else
            fail(Errc::ConfigError, "algorithm.k0 must have one entry or one per algorithm.k");
    }
    std::vector<SmoothCell> cells;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto k = ks[i];
        std::size_t n = n_fixed;
        if (k < 1) fail(Errc::ConfigError, "algorithm.k must be at least 1");
        if (has_c) {
            if (budget % k != 0) fail(Errc::ConfigError, fmt::format("algorithm.C={} is not divisible by k={}", budget, k));
            if (has_n && n_fixed * k != budget)
                fail(Errc::ConfigError, fmt::format("N*k={} contradicts algorithm.C={}", n_fixed * k, budget));
            n = budget / k;
        }
        const SmoothCell cell{algorithm, n, m, k, k0s[i]};
        try {
            validate(RolloutConfig{cell.n, cell.m, cell.k, cell.k0});
        } catch (const Error& e) {
            fail(Errc::ConfigError, e.what());
        }
        cells.push_back(cell);
    }
    return cells;
}

}  // namespace

Runner prepare_smooth(const Config& cfg)
{
    const auto seed = cfg.get_u64("seed", 1);
    const RngStream base(seed);
    auto setup = std::make_shared<ModelSetup>(build_model(cfg, base.split(Phase::Data)));
    const auto algorithm = cfg.get_choice("algorithm.kind", "paris", {"paris", "ffbsm", "ppg", "pgas"});
    const auto cells = smooth_cells(cfg, algorithm);
    const auto replicates = cfg.get_size("replicates", 100);
    const auto functional_name = cfg.get_choice("functional", "lag1", {"lag1", "zero"});
    const auto sampler = sampler_config(cfg);
    const bool timing = cfg.get_bool("output.timing", false);
    if (replicates < 1) fail(Errc::ConfigError, "replicates must be at least 1");
    if (algorithm != "ffbsm" && algorithm != "pgas") validate(sampler, *setup->model);
    if (setup->kind == "crnn" && (algorithm == "paris" || algorithm == "ppg") &&
        sampler.kind != BackwardSamplerKind::Hybrid)
        fail(Errc::ConfigError, "the crnn model requires sampler.kind = hybrid");

    return [=, &cfg](std::ostream& out, std::ostream& log) {
        const auto functional = make_functional(functional_name, setup->model->state_dim());
        const auto reference = exact_reference(*setup, functional_name);
        const auto d = functional->dim();
        const RngStream reps = base.split(Phase::Replicate);

        preamble(out, "smooth", cfg, seed);
        std::vector<std::string> header{"kind", "config", "algorithm", "N", "M", "k", "k0", "replicate", "component",
                                        "estimate", "reference", "error", "se", "failed", "failures", "error_code"};
        if (timing) header.push_back("wall_ms");
        write_row(out, header);

        std::size_t total_failed = 0, total = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& cell = cells[c];
            const RngStream cell_streams = reps.split(c);
            const auto results = run_replicates(replicates, [&](std::size_t r) {
                const Eigen::VectorXd est =
                    smooth_once(cell, *setup->model, setup->horizon(), *functional, sampler, cell_streams.split(r));
                return std::vector<double>(est.data(), est.data() + est.size());
            });
            auto prefix = [&](const char* kind, const std::string& rep) {
                return std::vector<std::string>{kind,
                                                std::to_string(c),
                                                cell.algorithm,
                                                std::to_string(cell.n),
                                                std::to_string(cell.m),
                                                std::to_string(cell.k),
                                                std::to_string(cell.k0),
                                                rep};
            };
            std::size_t failures = 0;
            for (std::size_t r = 0; r < results.size(); ++r) {
                const auto& res = results[r];
                failures += res.failed;
                for (std::size_t j = 0; j < d; ++j) {
                    const double est = res.failed ? kNaN : res.values[j];
                    const double ref = reference ? (*reference)[static_cast<Eigen::Index>(j)] : kNaN;
                    auto row = prefix("replicate", std::to_string(r));
                    row.insert(row.end(), {std::to_string(j), num(est), num(ref), num(est - ref), "",
                                           res.failed ? "1" : "0", "", res.code});
                    if (timing) row.push_back(num(res.wall_ms));
                    write_row(out, row);
                }
            }
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<double> values;
                for (const auto& res : results)
                    if (!res.failed) values.push_back(res.values[j]);
                const double ref = reference ? (*reference)[static_cast<Eigen::Index>(j)] : kNaN;
                const auto s = values.empty() ? stats::Summary{0, kNaN, kNaN, kNaN} : stats::summarize(values);
                auto row = prefix("summary", "");
                row.insert(row.end(), {std::to_string(j), num(s.mean), num(ref), num(s.mean - ref),
                                       num(s.standard_error), "", std::to_string(failures), ""});
                if (timing) row.push_back("");
                write_row(out, row);
            }
            if (failures > 0) log << fmt::format("config {}: {} of {} replicates failed\n", c, failures, replicates);
            total_failed += failures;
            total += replicates;
        }
        return total_failed == total ? kExitRuntime : kExitOk;
    };
}

// --------------------------------------------------------------- bias-k0

Runner prepare_bias_k0(const Config& cfg)
{
    const auto seed = cfg.get_u64("seed", 1);
    const RngStream base(seed);
    auto setup = std::make_shared<ModelSetup>(build_model(cfg, base.split(Phase::Data)));
    const auto n = cfg.get_size("algorithm.N", 64);
    const auto m = cfg.get_size("algorithm.M", 2);
    const auto ks = cfg.get_sizes("grid.k", {16});
    const auto k0_spec = cfg.get_strings("grid.k0", {"0", "2", "4", "8"});
    const auto replicates = cfg.get_size("replicates", 200);
    const auto init = cfg.get_choice("grid.init", "prior", {"prior", "filter"});
    const auto functional_name = cfg.get_choice("functional", "lag1", {"lag1", "zero"});
    const auto sampler = sampler_config(cfg);
    if (replicates < 2) fail(Errc::ConfigError, "replicates must be at least 2");
    if (ks.empty() || k0_spec.empty()) fail(Errc::ConfigError, "grid.k and grid.k0 must be non-empty");
    validate(sampler, *setup->model);

    // Cells (k, k0); "last" is k - 1 and "half" is floor(k / 2).
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (auto k : ks) {
        if (k < 1) fail(Errc::ConfigError, "grid.k entries must be at least 1");
        for (const auto& spec : k0_spec) {
            std::size_t k0 = 0;
            if (spec == "last")
                k0 = k - 1;
            else if (spec == "half")
                k0 = default_burn_in(k);
            else {
                Config one;
                one.set("k0", spec);
                k0 = one.get_size("k0", 0);
            }
            if (k0 < k && std::find(cells.begin(), cells.end(), std::pair{k, k0}) == cells.end())
                cells.emplace_back(k, k0);
        }
    }
    if (cells.empty()) fail(Errc::ConfigError, "no grid cell has k0 < k");
    try {
        validate(RolloutConfig{n, m, 1, 0});
    } catch (const Error& e) {
        fail(Errc::ConfigError, e.what());
    }
    const auto k_max = *std::max_element(ks.begin(), ks.end());

    return [=, &cfg](std::ostream& out, std::ostream& log) {
        const auto functional = make_functional(functional_name, setup->model->state_dim());
        const auto reference = exact_reference(*setup, functional_name);
        const auto d = functional->dim();
        const RngStream reps = base.split(Phase::Replicate);
        const auto horizon = setup->horizon();

        // One chain of k_max iterations per replicate serves every cell: the
        // first k iterations of it are exactly a k-iteration roll-out.
        const auto results = run_replicates(replicates, [&](std::size_t r) {
            const RngStream stream = reps.split(r);
            const FrozenPath start =
                init == "prior" ? FrozenPath{prior_path(*setup->model, horizon, stream.split(Phase::Init))}
                                : initial_path(*setup->model, horizon, n, stream.split(Phase::Init));
            const auto run = ppg_run(*setup->model, start, {n, m, k_max, 0}, *functional, sampler, stream);
            std::vector<double> flat;
            for (const auto& [k, k0] : cells) {
                const Eigen::VectorXd est =
                    rollout_average(std::span<const Eigen::VectorXd>(run.per_iteration.data(), k), k0);
                flat.insert(flat.end(), est.data(), est.data() + est.size());
            }
            return flat;
        });
        std::size_t failures = 0;
        for (const auto& res : results) failures += res.failed;

        preamble(out, "bias-k0", cfg, seed);
        write_row(out, {"kind", "N", "M", "k", "k0", "component", "replicates", "failures", "bias", "se", "abs_bias",
                        "reference", "check"});
        struct Cell {
            double abs_bias, se;
        };
        std::vector<std::vector<Cell>> table(cells.size(), std::vector<Cell>(d));
        for (std::size_t c = 0; c < cells.size(); ++c) {
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<double> errors;
                const double ref = reference ? (*reference)[static_cast<Eigen::Index>(j)] : kNaN;
                for (const auto& res : results)
                    if (!res.failed) errors.push_back(res.values[c * d + j] - ref);
                const auto s = errors.empty() ? stats::Summary{0, kNaN, kNaN, kNaN} : stats::summarize(errors);
                table[c][j] = {std::abs(s.mean), s.standard_error};
                write_row(out, {"cell", std::to_string(n), std::to_string(m), std::to_string(cells[c].first),
                                std::to_string(cells[c].second), std::to_string(j), std::to_string(replicates),
                                std::to_string(failures), num(s.mean), num(s.standard_error), num(std::abs(s.mean)),
                                num(ref), ""});
            }
        }
        // Decay check per k: |bias| non-increasing in k0 within one combined SE.
        for (auto k : ks) {
            std::vector<std::size_t> idx;
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (cells[c].first == k) idx.push_back(c);
            std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return cells[a].second < cells[b].second; });
            for (std::size_t j = 0; j < d; ++j) {
                bool ok = reference.has_value();
                for (std::size_t i = 1; i < idx.size(); ++i) {
                    const auto& prev = table[idx[i - 1]][j];
                    const auto& cur = table[idx[i]][j];
                    ok = ok && cur.abs_bias <= prev.abs_bias + std::hypot(prev.se, cur.se);
                }
                write_row(out, {"check", std::to_string(n), std::to_string(m), std::to_string(k), "",
                                std::to_string(j), std::to_string(replicates), std::to_string(failures), "", "", "",
                                "", ok ? "pass" : "fail"});
            }
        }
        if (failures > 0) log << fmt::format("{} of {} replicates failed\n", failures, replicates);
        return failures == replicates ? kExitRuntime : kExitOk;
    };
}

// ----------------------------------------------------------------- learn

Runner prepare_learn(const Config& cfg)
{
    const auto seed = cfg.get_u64("seed", 1);
    const RngStream base(seed);
    auto setup = std::make_shared<ModelSetup>(build_model(cfg, base.split(Phase::Data)));
    if (setup->kind == "discrete") fail(Errc::ConfigError, "learning supports model.kind = lgssm or crnn");
    const auto kernels = cfg.get_strings("learn.kernels", {"ppg", "pgas"});
    for (const auto& k : kernels)
        if (k != "ppg" && k != "pgas") fail(Errc::ConfigError, fmt::format("learn.kernels: unknown kernel '{}'", k));
    const auto seeds = cfg.get_size("learn.seeds", 25);
    const auto free = cfg.get_strings("learn.free", setup->lgssm ? std::vector<std::string>{"A", "B"}
                                                                  : std::vector<std::string>{"W", "B"});
    const double theta0_sd = cfg.get_double("learn.theta0_sd", 0.1);
    const auto em_iterations = cfg.get_size("learn.em_iterations", 5000);
    const auto nll_particles = cfg.get_size("learn.nll_particles", 1000);
    const auto dir = std::filesystem::path(cfg.get_string("output.dir", "learn_runs"));
    const bool timing = cfg.get_bool("output.timing", false);

    learning::ScoreAscentConfig sa;
    sa.iterations = cfg.get_size("learn.iterations", 500);
    sa.rollout = {cfg.get_size("algorithm.N", 64), cfg.get_size("algorithm.M", 2), cfg.get_size("algorithm.k", 8), 0};
    sa.rollout.k0 = cfg.get_size("algorithm.k0", default_burn_in(sa.rollout.k));
    sa.sampler = sampler_config(cfg);
    sa.adam.learning_rate = cfg.get_double("learn.learning_rate", sa.adam.learning_rate);
    sa.adam.sqrt_decay = cfg.get_bool("learn.sqrt_decay", true);
    sa.path_mode = cfg.get_choice("learn.path_mode", "warm", {"warm", "cold"}) == "warm" ? learning::PathMode::WarmStart
                                                                                       : learning::PathMode::ColdStart;
    sa.rescale_by_horizon = cfg.get_bool("learn.rescale", true);
    if (seeds < 1 || kernels.empty()) fail(Errc::ConfigError, "learn.seeds and learn.kernels must be non-empty");

    std::shared_ptr<learning::ParametricFamily> family;
    try {
        if (setup->lgssm)
            family = std::make_shared<learning::LgssmFamily>(*setup->lgssm, setup->observations, free);
        else
            family = std::make_shared<learning::CrnnFamily>(*setup->crnn, setup->observations, free);
        learning::validate(sa, *family);
    } catch (const Error& e) {
        fail(Errc::ConfigError, e.what());
    }

    return [=, &cfg](std::ostream& out, std::ostream& log) {
        learning::LearningOracles oracles;
        std::optional<models::LgssmParams> mle;
        const bool both_blocks = free.size() == 2;
        if (setup->lgssm) {
            const auto* lg = static_cast<const learning::LgssmFamily*>(family.get());
            const auto& obs = setup->observations;
            if (both_blocks) {
                mle = models::lgssm_exact_mle(*setup->lgssm, obs, em_iterations, 1e-13).params;
                oracles.d_mle = [lg, mle](const Eigen::VectorXd& theta) {
                    return learning::singular_value_distance(lg->params_at(theta), *mle);
                };
            }
            oracles.exact_score_norm = [lg, free, &obs](const Eigen::VectorXd& theta) {
                const auto score = models::lgssm_exact_score(lg->params_at(theta), obs);
                double sq = 0.0;
                for (const auto& b : free) sq += (b == "A" ? score.A : score.B).squaredNorm();
                return std::sqrt(sq);
            };
            oracles.nll = [lg, &obs](const Eigen::VectorXd& theta) {
                return -models::kalman_filter(lg->params_at(theta), obs).loglik;
            };
        }
        std::filesystem::create_directories(dir);

        struct SeedResult {
            std::string kernel;
            std::size_t seed;
            double d_mle = kNaN, nll = kNaN, grad_norm = kNaN;
            bool failed = false;
            std::string code;
        };
        std::vector<SeedResult> results(seeds * kernels.size());
        std::vector<learning::LearningRun> runs(results.size());
        const RngStream streams = base.split(Phase::Learning);
        parallel_for(
            results.size(),
            [&](std::size_t idx) {
                const std::size_t s = idx / kernels.size();
                const auto& kernel = kernels[idx % kernels.size()];
                auto& res = results[idx];
                res.kernel = kernel;
                res.seed = s;
                const RngStream stream = streams.split(s);
                try {
                    const Eigen::VectorXd theta0 =
                        learning::initial_theta(family->param_dim(), stream.split(Phase::Init), theta0_sd);
                    const RngStream run_rng = stream.split(Phase::Iteration).split(kernel == "ppg" ? 1 : 2);
                    runs[idx] = kernel == "ppg" ? learning::score_ascent_ppg(*family, theta0, sa, run_rng, oracles)
                                                : learning::score_ascent_pg(*family, theta0, sa, run_rng, oracles);
                    auto& last = runs[idx].rows.back();
                    if (!setup->lgssm) {
                        const auto model = family->make_model(last.theta);
                        const auto est =
                            pf_loglik(*model, family->num_observations() - 1, nll_particles, stream.split(Phase::Filter));
                        last.nll = -est.value;
                    }
                    res.d_mle = last.d_mle;
                    res.nll = last.nll;
                    res.grad_norm = last.grad_norm;
                } catch (const Error&) {
                    res.failed = true;
                    res.code = error_code(std::current_exception());
                }
            },
            1);

        preamble(out, "learn", cfg, seed);
        write_row(out, {"kind", "kernel", "seed", "runs", "failures", "d_mle", "d_mle_ci_low", "d_mle_ci_high", "nll",
                        "grad_norm", "sign_test_p", "error_code"});
        std::size_t failures = 0;
        for (std::size_t idx = 0; idx < results.size(); ++idx) {
            const auto& res = results[idx];
            failures += res.failed;
            write_row(out, {"run", res.kernel, std::to_string(res.seed), "1", res.failed ? "1" : "0", num(res.d_mle),
                            "", "", num(res.nll), num(res.grad_norm), "", res.code});
            if (res.failed) continue;
            const auto stem = dir / fmt::format("{}_seed{}", res.kernel, res.seed);
            auto csv = open_output(stem.string() + ".csv");
            preamble(csv, "learn", cfg, seed);
            runs[idx].write_csv(csv, timing);
            auto json = runs[idx].config;
            json["config_hash"] = fmt::format("{:016x}", cfg.hash());
            json["seed"] = seed;
            json["run_seed_index"] = res.seed;
            json["free_parameters"] = free;
            json["parameter_names"] = runs[idx].param_names;
            open_output(stem.string() + ".json") << json.dump(2) << '\n';
        }
        auto column = [&](const std::string& kernel, double SeedResult::*field) {
            std::vector<double> v;
            for (const auto& res : results)
                if (res.kernel == kernel && !res.failed) v.push_back(res.*field);
            return v;
        };
        for (const auto& kernel : kernels) {
            const auto d = column(kernel, &SeedResult::d_mle);
            const auto nll = column(kernel, &SeedResult::nll);
            const double med = d.empty() ? kNaN : stats::median(d);
            const auto ci = d.empty() ? std::pair{kNaN, kNaN} : stats::median_interval(d);
            const std::size_t ok = d.size();
            write_row(out, {"summary", kernel, "", std::to_string(seeds), std::to_string(seeds - ok), num(med),
                            num(ci.first), num(ci.second), num(nll.empty() ? kNaN : stats::median(nll)), "", "", ""});
        }
        if (kernels.size() == 2) {
            // Paired by seed: PPG strictly closer to the MLE (or lower NLL without an oracle).
            const bool by_d = mle.has_value();
            std::size_t wins = 0, pairs = 0;
            for (std::size_t s = 0; s < seeds; ++s) {
                const auto& a = results[s * 2];
                const auto& b = results[s * 2 + 1];
                if (a.failed || b.failed) continue;
                const auto& ppg = a.kernel == "ppg" ? a : b;
                const auto& pg = a.kernel == "ppg" ? b : a;
                ++pairs;
                wins += by_d ? ppg.d_mle < pg.d_mle : ppg.nll < pg.nll;
            }
            const double p = pairs > 0 ? stats::sign_test_upper_p_value(wins, pairs) : kNaN;
            write_row(out, {"comparison", "ppg<pgas", "", std::to_string(pairs), "", "", "", "", "", "", num(p),
                            by_d ? "by_d_mle" : "by_nll"});
        }
        if (failures > 0) log << fmt::format("{} of {} learning runs failed\n", failures, results.size());
        return failures == results.size() ? kExitRuntime : kExitOk;
    };
}

// ------------------------------------------------------------------ diag

Runner prepare_diag(const Config& cfg)
{
    const auto t = cfg.get_size("diag.t", 1);
    const auto grid = cfg.get_sizes("diag.N", {8, 16, 32, 64, 100, 1000});
    std::vector<double> rhos;
    if (cfg.has("diag.g_min") || cfg.has("diag.g_max") || cfg.has("diag.m_min") || cfg.has("diag.m_max")) {
        const Bounds g{cfg.get_double("diag.g_min", 1.0), cfg.get_double("diag.g_max", 1.0)};
        const Bounds dens{cfg.get_double("diag.m_min", 1.0), cfg.get_double("diag.m_max", 1.0)};
        const std::vector<Bounds> gs(t + 1, g), ms(t + 1, dens);
        try {
            rhos.push_back(rho_bound(gs, ms, t));
        } catch (const Error& e) {
            fail(Errc::ConfigError, e.what());
        }
    } else {
        rhos = cfg.get_doubles("diag.rho", {1.0});
    }
    if (grid.empty()) fail(Errc::ConfigError, "diag.N must be non-empty");
    std::vector<MixingDiagnostics> rows;
    try {
        for (double rho : rhos)
            for (auto n : grid) rows.push_back(kappa_rate(rho, n, t));
    } catch (const Error& e) {
        fail(Errc::ConfigError, e.what());
    }
    return [=, &cfg](std::ostream& out, std::ostream&) {
        preamble(out, "diag", cfg, 0);
        write_row(out, {"rho", "t", "N", "N_t", "n_min", "kappa", "below_threshold"});
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& d = rows[i];
            write_row(out, {num(d.rho_t), std::to_string(t), std::to_string(grid[i % grid.size()]), num(d.threshold),
                            std::to_string(d.n_min), num(d.kappa), d.below_threshold ? "1" : "0"});
        }
        return kExitOk;
    };
}

// -------------------------------------------------------------- simulate

Runner prepare_simulate(const Config& cfg)
{
    const auto seed = cfg.get_u64("seed", 1);
    const RngStream base(seed);
    if (cfg.has("model.data")) fail(Errc::ConfigError, "simulate generates data; model.data is not allowed");
    auto setup = std::make_shared<ModelSetup>(build_model(cfg, base.split(Phase::Data)));
    const auto states_path = cfg.find("output.states");
    return [=, &cfg](std::ostream& out, std::ostream&) {
        preamble(out, "simulate", cfg, seed);
        if (setup->hmm) {
            // Discrete data are the emission likelihood rows.
            out << "# emission likelihoods per state\n";
            std::vector<std::string> header;
            for (Eigen::Index j = 0; j < setup->hmm->emissions.cols(); ++j) header.push_back(fmt::format("g_{}", j + 1));
            write_row(out, header);
            for (Eigen::Index s = 0; s < setup->hmm->emissions.rows(); ++s) {
                std::vector<std::string> row;
                for (Eigen::Index j = 0; j < setup->hmm->emissions.cols(); ++j)
                    row.push_back(num(setup->hmm->emissions(s, j)));
                write_row(out, row);
            }
        } else {
            models::write_observations_csv(out, setup->observations);
        }
        if (states_path) {
            auto st = open_output(*states_path);
            preamble(st, "simulate", cfg, seed);
            std::vector<std::string> header;
            for (Eigen::Index i = 0; i < setup->states.rows(); ++i) header.push_back(fmt::format("x_{}", i + 1));
            write_row(st, header);
            for (Eigen::Index s = 0; s < setup->states.cols(); ++s) {
                std::vector<std::string> row;
                for (Eigen::Index i = 0; i < setup->states.rows(); ++i) row.push_back(num(setup->states(i, s)));
                write_row(st, row);
            }
        }
        return kExitOk;
    };
}

// -------------------------------------------------------------- dispatch

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"smooth", "bias-k0", "learn", "diag", "simulate"};
    return names;
}

int run_command(std::string_view command, const Config& cfg, std::ostream& stdout_stream, std::ostream& log)
{
    Runner runner;
    std::string output;
    std::ofstream file;
    try {
        if (command == "smooth")
            runner = prepare_smooth(cfg);
        else if (command == "bias-k0")
            runner = prepare_bias_k0(cfg);
        else if (command == "learn")
            runner = prepare_learn(cfg);
        else if (command == "diag")
            runner = prepare_diag(cfg);
        else if (command == "simulate")
            runner = prepare_simulate(cfg);
        else
            fail(Errc::ConfigError, fmt::format("unknown command '{}'", command));
        output = cfg.get_string("output.path", "-");
        cfg.reject_unused();
        if (output != "-") file = open_output(output);
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        return runner(output == "-" ? stdout_stream : file, log);
    } catch (const std::exception& e) {
        log << "runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int run_check(std::string_view command, std::uint64_t seed, std::ostream& out)
{
    bool ok = true;
    for (int id : acceptance::criteria_for_command(command)) {
        const auto result = acceptance::run(id, seed);
        out << acceptance::format_line(result) << '\n' << std::flush;
        ok = ok && result.ok();
    }
    return ok ? kExitOk : kExitCheck;
}

}  // namespace smc::cli
