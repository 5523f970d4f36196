#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace smc::learning {

/// One row of a learning run. Row 0 holds theta_0 and no gradient.
struct LearningRow {
    std::size_t iteration = 0;
    Eigen::VectorXd theta;
    Eigen::VectorXd gradient;  ///< rescaled gradient estimate used for the step
    double grad_norm = 0.0;
    double exact_score_norm;   ///< NaN when no oracle is configured
    double d_mle;              ///< NaN when no oracle is configured
    double nll;                ///< NaN unless requested
    double wall_ms = 0.0;      ///< elapsed since the start of the run
};

struct LearningRun {
    std::vector<std::string> param_names;
    std::vector<LearningRow> rows;
    std::uint64_t seed = 0;
    nlohmann::json config;

    const LearningRow& final_row() const { return rows.back(); }

    /// Columns: iteration, theta..., grad_norm, exact_score_norm, d_mle, nll, wall_ms.
    /// With `with_timing` false the wall_ms column is omitted, leaving only
    /// reproducible columns.
    void write_csv(std::ostream& out, bool with_timing = true) const;
    std::string config_json() const { return config.dump(2); }
};

}  // namespace smc::learning
