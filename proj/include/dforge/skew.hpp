#pragma once

#include "dforge/diffusion.hpp"
#include "dforge/sphere.hpp"
#include "dforge/walk.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dforge {

/// Density f = d(mu)/d(l) of the angular clock's Revuz measure against the speed measure.
class RevuzDensity {
public:
    enum class Kind { Zero, Constant, InverseSquare, Custom };

    static RevuzDensity zero();
    static RevuzDensity constant(double c);
    static RevuzDensity inverse_square(double c = 1.0); ///< f(x) = c / x^2
    static RevuzDensity custom(std::function<double(double)> f, std::string label);

    Kind kind() const { return kind_; }
    double coeff() const { return coeff_; }
    const std::string& label() const { return label_; }
    double value(double x) const;

    /// Constant ratio other/this when both are catalogued and proportional.
    std::optional<double> proportionality(const RevuzDensity& other) const;

private:
    Kind kind_ = Kind::Zero;
    double coeff_ = 0.0;
    std::function<double(double)> f_;
    std::string label_;
};

/// Rotationally invariant diffusion written as radial diffusion + spherical
/// Brownian motion run by the PCAF clock with Revuz density f against l.
/// sphere_time_scale kappa runs the angular factor with generator
/// kappa * (1/2) Laplace-Beltrami (the constant of subspaces-up-to-c).
struct SkewProductSpec {
    DiffusionSpec radial;
    int d = 3;
    RevuzDensity revuz_density = RevuzDensity::inverse_square();
    double sphere_time_scale = 1.0;

    void validate() const {
        radial.validate();
        if (d < 2) throw ParamError("skew product needs d >= 2");
        if (!(sphere_time_scale > 0)) throw ParamError("sphere time scale must be positive");
    }
};

/// Radial profile of a rotationally invariant weight rho(x) = rho_hat(|x|).
struct RotInvariantDensity {
    std::function<double(double)> rho_hat;
    int d = 3;
    std::string label = "custom";
};

/// Catalogued compactly supported radial bumps with derivative accessors.
struct RadialBump {
    enum class Kind { Quartic, Smooth, Zero };
    Kind kind = Kind::Quartic;
    double a = 1.0, b = 2.0;

    double value(double r) const;
    double derivative(double r) const;
};

/// Angular parts with exact sphere integrals: constants, coordinate functions
/// x_i, and the degree-two products x_i x_j (i != j).
struct AngularPart {
    enum class Kind { Constant, Coordinate, CoordinateProduct };
    Kind kind = Kind::Constant;
    double c = 1.0; ///< constant value
    int i = 0, j = 1;

    double l2_norm_sq(int d) const;   ///< integral over S^{d-1} of u^2 dsigma
    double eigenvalue(int d) const;   ///< -Laplace_S u = lambda u
    double value(const std::vector<double>& theta) const;
};

struct TensorTestFunction {
    RadialBump radial;
    AngularPart angular;
};

/// Dirichlet energy of u1 (x) u2 under the skew-product form:
/// (1/2) int u1'^2 dl * |u2|^2_sigma + kappa * (1/2) lambda |u2|^2_sigma * int u1^2 dmu.
double energy_tensor(const SkewProductSpec& spec, const TensorTestFunction& u);

/// Result of the structural subspace test between two skew-product specs.
struct CriterionReport {
    bool is_subspace = false;
    std::optional<double> c;
    std::optional<bool> proper;
    std::vector<double> speed_residuals;
    std::vector<double> revuz_ratio_residuals;
    std::string note;
};

/// Candidate is a regular subspace of base iff the candidate radial scale is a
/// selector thinning of the base scale, the speed measures coincide, the Revuz
/// measures are proportional with constant c, and the angular clock rate
/// carries the matching 1/c. StructuralError when the scale is not
/// representable as a thinning of the base.
CriterionReport check_subspace_criterion(const SkewProductSpec& candidate,
                                         const SkewProductSpec& base);

/// Global properties of the skew product: copies the radial classification;
/// irreducible always.
GlobalProperties classify_skew(const SkewProductSpec& spec);

/// Radial spec of the energy form with weight rho(x) = rho_hat(|x|):
/// dp = dx / (|S^{d-1}| rho_hat x^{d-1}), l = |S^{d-1}| rho_hat x^{d-1} dx,
/// angular clock density f(x) = 1/x^2.
SkewProductSpec radial_spec_from_density(const RotInvariantDensity& rho);

/// Skew-product path: radial walk + PCAF clock + spherical path read at the clock.
struct SkewPath {
    int d = 3;
    std::vector<double> times;
    std::vector<double> radius;
    std::vector<double> angle; ///< row-major, d per time
    std::vector<double> pcaf;
    ExitFlag exit_flag = ExitFlag::Horizon;
};

SkewPath simulate_skew(const SkewProductSpec& spec, double r0,
                       const std::vector<double>& theta0, const WalkConfig& cfg);

} // namespace dforge
