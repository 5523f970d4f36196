#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smc {

enum class Errc {
    AllWeightsZero,
    NegativeWeight,
    ZeroBackwardMass,
    MissingDensityUpperBound,
    DimensionMismatch,
    SingularCovariance,
    SingularInnovation,
    NonpositiveBound,
    BelowParticleThreshold,
    UnsupportedParameter,
    NonFiniteGradient,
    InvalidArgument,
    ConfigError,
};

std::string_view to_string(Errc code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace smc
