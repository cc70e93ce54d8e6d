#pragma once

#include "dforge/errors.hpp"
#include "dforge/rng.hpp"

#include <cstdint>
#include <vector>

namespace dforge {

struct SphereConfig {
    int dim_ambient = 3; ///< sphere is S^{d-1} in R^d
    double dt = 1e-3;
    std::uint64_t seed = 0;

    void validate() const {
        if (dim_ambient < 2) throw ParamError("sphere needs ambient dimension >= 2");
        if (!(dt > 0)) throw ParamError("sphere step must be positive");
    }
};

struct SpherePath {
    int d = 3;
    std::vector<double> times;
    std::vector<double> points; ///< row-major, d entries per time
};

/// One Brownian step on S^{d-1}: tangent Gaussian of covariance dt * (I - tt'),
/// mapped to the sphere along the geodesic and renormalized. Approximates the
/// generator (1/2) Laplace-Beltrami; degree-one decay E[theta_t . theta_0] =
/// exp(-(d-1) t / 2).
class SphereStepper {
public:
    explicit SphereStepper(int dim_ambient);
    void step(std::vector<double>& theta, double dt, Rng& rng) const;

private:
    int d_;
};

/// Spherical Brownian motion path from a unit vector, recorded every step.
SpherePath simulate_sphere(const SphereConfig& cfg, const std::vector<double>& theta0,
                           double duration);

} // namespace dforge
