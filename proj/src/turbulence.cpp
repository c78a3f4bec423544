#include "turbilink/turbulence.hpp"

#include <cmath>

#include "turbilink/errors.hpp"

namespace turbilink {

TurbulenceChannel::TurbulenceChannel(double structure_constant) : cn2_(structure_constant) {
    if (!std::isfinite(structure_constant) || structure_constant < 0.0)
        throw DomainError("cn2", "must be finite and >= 0");
}

ExtendedReal coherence_length(const TurbulenceChannel& channel, const PhysicalSetup& setup,
                              double z) {
    if (!std::isfinite(z) || z < 0.0) throw DomainError("z", "must be finite and >= 0");
    if (channel.free_space() || z == 0.0) return ExtendedReal::infinite();
    const double k = setup.wavenumber();
    return ExtendedReal::finite(std::pow(0.546 * channel.structure_constant() * k * k * z, -0.6));
}

double turbulence_factor(const TurbulenceChannel& channel, const PhysicalSetup& setup, double z,
                         const Eigen::Vector2d& source_separation,
                         const Eigen::Vector2d& observed_separation) {
    const ExtendedReal rho0 = coherence_length(channel, setup, z);
    if (rho0.is_infinite()) return 1.0;
    const double q = source_separation.squaredNorm() + source_separation.dot(observed_separation) +
                     observed_separation.squaredNorm();
    return std::exp(-q / (rho0.value() * rho0.value()));
}

}  // namespace turbilink
