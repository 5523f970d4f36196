#include "smc/functional.hpp"

#include <algorithm>
#include <vector>

#include "smc/error.hpp"

namespace smc {

Eigen::VectorXd AdditiveFunctional::evaluate_path(const Eigen::MatrixXd& path) const
{
    Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim()));
    std::vector<double> buf(dim());
    const std::size_t state_dim = static_cast<std::size_t>(path.rows());
    for (Eigen::Index s = 0; s + 1 < path.cols(); ++s) {
        term(static_cast<std::size_t>(s), {path.data() + s * state_dim, state_dim},
             {path.data() + (s + 1) * state_dim, state_dim}, buf);
        for (std::size_t c = 0; c < dim(); ++c) total[static_cast<Eigen::Index>(c)] += buf[c];
    }
    return total;
}

void ZeroFunctional::term(std::size_t, State, State, std::span<double> out) const
{
    std::fill(out.begin(), out.end(), 0.0);
}

void LagOneProduct::term(std::size_t, State x, State x_next, std::span<double> out) const
{
    for (std::size_t c = 0; c < state_dim_; ++c)
        for (std::size_t r = 0; r < state_dim_; ++r) out[c * state_dim_ + r] = x[r] * x_next[c];
}

}  // namespace smc
