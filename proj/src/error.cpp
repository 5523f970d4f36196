#include "smc/error.hpp"

namespace smc {

std::string_view to_string(Errc code)
{
    switch (code) {
        case Errc::AllWeightsZero: return "AllWeightsZero";
        case Errc::NegativeWeight: return "NegativeWeight";
        case Errc::ZeroBackwardMass: return "ZeroBackwardMass";
        case Errc::MissingDensityUpperBound: return "MissingDensityUpperBound";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::SingularCovariance: return "SingularCovariance";
        case Errc::SingularInnovation: return "SingularInnovation";
        case Errc::NonpositiveBound: return "NonpositiveBound";
        case Errc::BelowParticleThreshold: return "BelowParticleThreshold";
        case Errc::UnsupportedParameter: return "UnsupportedParameter";
        case Errc::NonFiniteGradient: return "NonFiniteGradient";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace smc
