#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smc/model.hpp"
#include "smc/particle_cloud.hpp"
#include "smc/rng.hpp"

namespace test {

// Finite state space {0..K-1} with hand-picked potentials and densities.
// Transitions are sampled from the normalized density rows.
class TableModel final : public smc::StateSpaceModel {
public:
    TableModel(std::vector<double> potentials, Eigen::MatrixXd density, std::optional<double> upper = std::nullopt)
        : g_(std::move(potentials)), density_(std::move(density)), upper_(upper)
    {
    }
    std::size_t state_dim() const override { return 1; }
    void init_sample(smc::RngStream& rng, smc::StateOut out) const override
    {
        out[0] = static_cast<double>(rng.below(g_.size()));
    }
    void transition_sample(std::size_t, smc::State x, smc::RngStream& rng, smc::StateOut out) const override
    {
        const auto row = density_.row(static_cast<Eigen::Index>(x[0]));
        double u = rng.uniform() * row.sum();
        Eigen::Index j = 0;
        while (j + 1 < row.size() && u >= row[j]) u -= row[j++];
        out[0] = static_cast<double>(j);
    }
    double transition_density(std::size_t, smc::State x, smc::State x_next) const override
    {
        return density_(static_cast<Eigen::Index>(x[0]), static_cast<Eigen::Index>(x_next[0]));
    }
    std::optional<double> transition_density_upper(std::size_t) const override { return upper_; }
    double potential(std::size_t, smc::State x) const override { return g_[static_cast<std::size_t>(x[0])]; }

private:
    std::vector<double> g_;
    Eigen::MatrixXd density_;
    std::optional<double> upper_;
};

// Deterministic initial state x0, random-walk transitions and a constant potential.
class ConstantModel final : public smc::StateSpaceModel {
public:
    ConstantModel(double x0, double g) : x0_(x0), g_(g) {}
    std::size_t state_dim() const override { return 1; }
    void init_sample(smc::RngStream&, smc::StateOut out) const override { out[0] = x0_; }
    void transition_sample(std::size_t, smc::State x, smc::RngStream& rng, smc::StateOut out) const override
    {
        out[0] = x[0] + rng.normal();
    }
    double transition_density(std::size_t, smc::State x, smc::State x_next) const override
    {
        const double r = x_next[0] - x[0];
        return std::exp(-0.5 * r * r) / std::sqrt(2.0 * M_PI);
    }
    std::optional<double> transition_density_upper(std::size_t) const override { return 1.0 / std::sqrt(2.0 * M_PI); }
    double potential(std::size_t, smc::State) const override { return g_; }

private:
    double x0_;
    double g_;
};

// Cloud whose particle j holds the value values[j].
inline smc::ParticleCloud cloud_of(const smc::StateSpaceModel& model, std::vector<double> values,
                                   std::size_t time = 0)
{
    Eigen::MatrixXd p(1, static_cast<Eigen::Index>(values.size()));
    for (std::size_t j = 0; j < values.size(); ++j) p(0, static_cast<Eigen::Index>(j)) = values[j];
    return smc::ParticleCloud(model, time, std::move(p));
}

inline std::vector<double> iota(std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
    return v;
}

}  // namespace test
