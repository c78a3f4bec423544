#pragma once

#include <Eigen/Core>

#include "turbilink/extended_real.hpp"
#include "turbilink/params.hpp"

namespace turbilink {

// Weak Kolmogorov channel described by its refractive-index structure
// constant (m^-2/3). Cn2 = 0 is free space.
class TurbulenceChannel {
public:
    explicit TurbulenceChannel(double structure_constant);
    double structure_constant() const { return cn2_; }
    bool free_space() const { return cn2_ == 0.0; }

private:
    double cn2_;
};

// Spherical-wave coherence length (0.546 Cn2 k^2 z)^(-3/5); infinite for
// free space or z = 0.
ExtendedReal coherence_length(const TurbulenceChannel& channel, const PhysicalSetup& setup,
                              double z);

// Ensemble-averaged two-point factor in the quadratic approximation,
// exp[-(a.a + a.b + b.b)/rho0^2] with a the source-plane separation and b
// the observation-plane separation.
double turbulence_factor(const TurbulenceChannel& channel, const PhysicalSetup& setup, double z,
                         const Eigen::Vector2d& source_separation,
                         const Eigen::Vector2d& observed_separation);

}  // namespace turbilink
