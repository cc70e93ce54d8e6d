#include "dforge/sphere.hpp"

#include <cmath>

namespace dforge {

SphereStepper::SphereStepper(int dim_ambient) : d_(dim_ambient) {
    if (d_ < 2) throw ParamError("sphere needs ambient dimension >= 2");
}

void SphereStepper::step(std::vector<double>& theta, double dt, Rng& rng) const {
    const double s = std::sqrt(dt);
    double dot = 0.0;
    double v[16];
    double* xi = v;
    std::vector<double> big;
    if (d_ > 16) {
        big.resize(static_cast<std::size_t>(d_));
        xi = big.data();
    }
    for (int i = 0; i < d_; ++i) {
        xi[i] = rng.normal();
        dot += xi[i] * theta[static_cast<std::size_t>(i)];
    }
    double norm2 = 0.0;
    for (int i = 0; i < d_; ++i) {
        xi[i] = s * (xi[i] - dot * theta[static_cast<std::size_t>(i)]);
        norm2 += xi[i] * xi[i];
    }
    const double r = std::sqrt(norm2);
    const double c = std::cos(r);
    const double k = r > 1e-300 ? std::sin(r) / r : 1.0;
    double out_norm2 = 0.0;
    for (int i = 0; i < d_; ++i) {
        const double t = c * theta[static_cast<std::size_t>(i)] + k * xi[i];
        theta[static_cast<std::size_t>(i)] = t;
        out_norm2 += t * t;
    }
    const double inv = 1.0 / std::sqrt(out_norm2);
    for (int i = 0; i < d_; ++i) theta[static_cast<std::size_t>(i)] *= inv;
}

SpherePath simulate_sphere(const SphereConfig& cfg, const std::vector<double>& theta0,
                           double duration) {
    cfg.validate();
    if (static_cast<int>(theta0.size()) != cfg.dim_ambient)
        throw ParamError("theta0 dimension mismatch");
    double n2 = 0.0;
    for (double v : theta0) n2 += v * v;
    if (std::abs(n2 - 1.0) > 1e-12) throw ParamError("theta0 must be a unit vector");
    if (!(duration >= 0)) throw ParamError("duration must be nonnegative");

    SphereStepper stepper(cfg.dim_ambient);
    Rng rng(derive_seed(cfg.seed, 2, 0));
    SpherePath path;
    path.d = cfg.dim_ambient;
    std::vector<double> theta = theta0;
    double t = 0.0;
    path.times.push_back(0.0);
    path.points.insert(path.points.end(), theta.begin(), theta.end());
    while (t < duration - 1e-15) {
        const double dt = std::min(cfg.dt, duration - t);
        stepper.step(theta, dt, rng);
        t += dt;
        path.times.push_back(t);
        path.points.insert(path.points.end(), theta.begin(), theta.end());
    }
    return path;
}

} // namespace dforge
