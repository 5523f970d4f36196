#include "smc/learning/learning_run.hpp"

#include <ostream>

#include <fmt/format.h>

namespace smc::learning {

void LearningRun::write_csv(std::ostream& out, bool with_timing) const
{
    std::string buf = "iteration";
    for (const auto& name : param_names) buf += "," + name;
    buf += ",grad_norm,exact_score_norm,d_mle,nll";
    if (with_timing) buf += ",wall_ms";
    buf += '\n';
    for (const auto& row : rows) {
        buf += fmt::format("{}", row.iteration);
        for (Eigen::Index i = 0; i < row.theta.size(); ++i) buf += fmt::format(",{:.17g}", row.theta[i]);
        buf += fmt::format(",{:.17g},{:.17g},{:.17g},{:.17g}", row.grad_norm, row.exact_score_norm, row.d_mle, row.nll);
        if (with_timing) buf += fmt::format(",{:.3f}", row.wall_ms);
        buf += '\n';
    }
    out << buf;
}

}  // namespace smc::learning
