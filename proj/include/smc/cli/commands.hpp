#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "smc/cli/config.hpp"
#include "smc/model.hpp"
#include "smc/models/crnn.hpp"
#include "smc/models/discrete_hmm.hpp"
#include "smc/models/lgssm.hpp"
#include "smc/rng.hpp"

namespace smc::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitRuntime = 3,
    kExitCheck = 4,
};

/// The model section of a config, resolved. Observations come from
/// `model.data` when given and are simulated otherwise.
struct ModelSetup {
    std::string kind;  ///< lgssm | crnn | discrete
    std::optional<models::LgssmParams> lgssm;
    std::optional<models::CrnnParams> crnn;
    std::optional<models::DiscreteHmm> hmm;
    Eigen::MatrixXd observations;  ///< dy x T (1 x T of zeros for discrete)
    Eigen::MatrixXd states;        ///< simulated states, empty when read from file
    std::unique_ptr<StateSpaceModel> model;

    std::size_t horizon() const { return static_cast<std::size_t>(observations.cols()); }
};

ModelSetup build_model(const Config& cfg, const RngStream& data_stream);

/// Exact smoothed expectation of the named functional ("lag1" or "zero") over
/// x_{0:T}, when the model has an oracle.
std::optional<Eigen::VectorXd> exact_reference(const ModelSetup& setup, const std::string& functional);

/// Path x_{0:T} drawn from the model's prior dynamics.
Eigen::MatrixXd prior_path(const StateSpaceModel& model, std::size_t horizon, RngStream rng);

/// "{:.17g}", with nan/inf spelled out.
std::string num(double v);

/// A validated command, ready to run. Construction reads every config key,
/// so configuration errors surface before any work starts.
using Runner = std::function<int(std::ostream& out, std::ostream& log)>;

Runner prepare_smooth(const Config& cfg);
Runner prepare_bias_k0(const Config& cfg);
Runner prepare_learn(const Config& cfg);
Runner prepare_diag(const Config& cfg);
Runner prepare_simulate(const Config& cfg);

const std::vector<std::string>& command_names();

/// Prepares and runs `command`, writing the main CSV to `output.path`
/// (stdout for "-"). Returns an ExitCode.
int run_command(std::string_view command, const Config& cfg, std::ostream& stdout_stream, std::ostream& log);

/// Runs the built-in acceptance criteria for `command`; kExitCheck on failure.
int run_check(std::string_view command, std::uint64_t seed, std::ostream& out);

}  // namespace smc::cli
