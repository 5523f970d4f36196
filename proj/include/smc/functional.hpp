#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "smc/model.hpp"

namespace smc {

/// h_t(x_{0:t}) = sum_{s<t} term(s, x_s, x_{s+1}), with d-dimensional terms.
class AdditiveFunctional {
public:
    virtual ~AdditiveFunctional() = default;

    virtual std::size_t dim() const = 0;
    /// Writes term(s, x, x_next) into `out` (length dim()).
    virtual void term(std::size_t s, State x, State x_next, std::span<double> out) const = 0;
    /// Sup-norm of term(s, ., .), diagnostics only.
    virtual std::optional<double> sup_bound(std::size_t /*s*/) const { return std::nullopt; }

    /// Evaluates the functional along a dim x (T+1) path.
    Eigen::VectorXd evaluate_path(const Eigen::MatrixXd& path) const;
};

class ZeroFunctional final : public AdditiveFunctional {
public:
    explicit ZeroFunctional(std::size_t dim = 1) : dim_(dim) {}
    std::size_t dim() const override { return dim_; }
    void term(std::size_t, State, State, std::span<double> out) const override;
    std::optional<double> sup_bound(std::size_t) const override { return 0.0; }

private:
    std::size_t dim_;
};

/// Lag-one cross moment: term = vec(x x_next^T) (column-major), which is
/// x * x_next for scalar states.
class LagOneProduct final : public AdditiveFunctional {
public:
    explicit LagOneProduct(std::size_t state_dim = 1) : state_dim_(state_dim) {}
    std::size_t dim() const override { return state_dim_ * state_dim_; }
    void term(std::size_t s, State x, State x_next, std::span<double> out) const override;

private:
    std::size_t state_dim_;
};

/// Adapter for ad hoc functionals (tests, CLI experiments).
class LambdaFunctional final : public AdditiveFunctional {
public:
    using Term = std::function<void(std::size_t, State, State, std::span<double>)>;
    LambdaFunctional(std::size_t dim, Term term) : dim_(dim), term_(std::move(term)) {}
    std::size_t dim() const override { return dim_; }
    void term(std::size_t s, State x, State x_next, std::span<double> out) const override
    {
        term_(s, x, x_next, out);
    }

private:
    std::size_t dim_;
    Term term_;
};

using StatsMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// N x d matrix of per-particle smoothing statistics at one time index.
struct BackwardStats {
    StatsMatrix values;
    std::size_t time_index = 0;

    static BackwardStats zeros(std::size_t n, std::size_t d, std::size_t time_index = 0)
    {
        return {StatsMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d)), time_index};
    }
    std::size_t rows() const noexcept { return static_cast<std::size_t>(values.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(values.cols()); }
    std::span<const double> row(std::size_t i) const noexcept
    {
        return {values.data() + i * dim(), dim()};
    }
    /// N^{-1} sum_i b^i.
    Eigen::VectorXd mean() const { return values.colwise().mean().transpose(); }
};

}  // namespace smc
