#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

namespace smc::models {

/// Reads a CSV with header y_1..y_dy and one row per time step. Returns a
/// dy x T matrix. Throws ConfigError on malformed input.
Eigen::MatrixXd read_observations_csv(std::istream& in);
Eigen::MatrixXd read_observations_csv(const std::filesystem::path& path);

/// Writes `observations` (dy x T) in the format accepted by read_observations_csv.
void write_observations_csv(std::ostream& out, const Eigen::MatrixXd& observations);
void write_observations_csv(const std::filesystem::path& path, const Eigen::MatrixXd& observations);

}  // namespace smc::models
