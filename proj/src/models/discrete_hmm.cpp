#include "smc/models/discrete_hmm.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "smc/error.hpp"

namespace smc::models {

void DiscreteHmm::validate() const
{
    const auto k = initial.size();
    if (k < 1 || transition.rows() != k || transition.cols() != k || (emissions.size() > 0 && emissions.cols() != k))
        fail(Errc::DimensionMismatch, "inconsistent HMM dimensions");
    if ((initial.array() < 0.0).any() || std::abs(initial.sum() - 1.0) > 1e-12)
        fail(Errc::InvalidArgument, "initial distribution must be a probability vector");
    for (Eigen::Index i = 0; i < k; ++i)
        if ((transition.row(i).array() < 0.0).any() || std::abs(transition.row(i).sum() - 1.0) > 1e-12)
            fail(Errc::InvalidArgument, fmt::format("transition row {} is not stochastic", i));
    if ((emissions.array() < 0.0).any() || !emissions.allFinite())
        fail(Errc::NegativeWeight, "emission weights must be nonnegative");
}

namespace {

Eigen::VectorXd cumulative(const Eigen::VectorXd& p)
{
    Eigen::VectorXd c(p.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) c[i] = (acc += p[i]);
    return c;
}

}  // namespace

DiscreteHmmModel::DiscreteHmmModel(DiscreteHmm hmm) : hmm_(std::move(hmm))
{
    hmm_.validate();
    initial_cdf_ = cumulative(hmm_.initial);
    for (Eigen::Index i = 0; i < hmm_.transition.rows(); ++i)
        transition_cdfs_.push_back(cumulative(hmm_.transition.row(i).transpose()));
    max_transition_ = hmm_.transition.maxCoeff();
}

std::size_t DiscreteHmmModel::draw(const Eigen::VectorXd& cdf, RngStream& rng) const
{
    const double u = rng.uniform() * cdf[cdf.size() - 1];
    const auto* begin = cdf.data();
    const auto* it = std::upper_bound(begin, begin + cdf.size(), u);
    return std::min(static_cast<std::size_t>(it - begin), static_cast<std::size_t>(cdf.size() - 1));
}

void DiscreteHmmModel::init_sample(RngStream& rng, StateOut out) const
{
    out[0] = static_cast<double>(draw(initial_cdf_, rng));
}

void DiscreteHmmModel::transition_sample(std::size_t, State x, RngStream& rng, StateOut out) const
{
    out[0] = static_cast<double>(draw(transition_cdfs_[index(x)], rng));
}

double DiscreteHmmModel::transition_density(std::size_t, State x, State x_next) const
{
    return hmm_.transition(static_cast<Eigen::Index>(index(x)), static_cast<Eigen::Index>(index(x_next)));
}

std::optional<double> DiscreteHmmModel::transition_density_upper(std::size_t) const
{
    return max_transition_;
}

double DiscreteHmmModel::potential(std::size_t s, State x) const
{
    return hmm_.emission(s, index(x));
}

DiscreteSmoothing discrete_fb_smooth(const DiscreteHmm& hmm, std::size_t horizon)
{
    hmm.validate();
    const auto k = static_cast<Eigen::Index>(hmm.num_states());
    const std::size_t n = horizon + 1;
    auto g = [&](std::size_t s) {
        Eigen::VectorXd v(k);
        for (Eigen::Index x = 0; x < k; ++x) v[x] = hmm.emission(s, static_cast<std::size_t>(x));
        return v;
    };

    // alpha[s] is the normalized predictive law of X_s given y_{0:s-1}.
    std::vector<Eigen::VectorXd> alpha(n);
    DiscreteSmoothing out;
    alpha[0] = hmm.initial;
    for (std::size_t s = 0; s + 1 < n; ++s) {
        const Eigen::RowVectorXd weighted = alpha[s].cwiseProduct(g(s)).transpose();
        const double mass = weighted.sum();
        if (!(mass > 0.0)) fail(Errc::AllWeightsZero, fmt::format("zero likelihood at time {}", s));
        out.log_normalizer += std::log(mass);
        alpha[s + 1] = (weighted * hmm.transition).transpose() / mass;
    }

    // beta[s](x) proportional to p(y_{s:T-1} | X_s = x).
    std::vector<Eigen::VectorXd> beta(n);
    beta[n - 1] = Eigen::VectorXd::Ones(k);
    for (std::size_t s = n - 1; s-- > 0;) {
        const Eigen::VectorXd b = g(s).cwiseProduct(hmm.transition * beta[s + 1]);
        beta[s] = b / b.maxCoeff();
    }

    out.marginals.resize(static_cast<Eigen::Index>(n), k);
    for (std::size_t s = 0; s < n; ++s) {
        const Eigen::VectorXd m = alpha[s].cwiseProduct(beta[s]);
        out.marginals.row(static_cast<Eigen::Index>(s)) = (m / m.sum()).transpose();
    }
    for (std::size_t s = 0; s + 1 < n; ++s) {
        Eigen::MatrixXd joint = alpha[s].cwiseProduct(g(s)).asDiagonal() * hmm.transition * beta[s + 1].asDiagonal();
        out.pairwise.push_back(joint / joint.sum());
    }
    return out;
}

}  // namespace smc::models
