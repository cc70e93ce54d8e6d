#include "dforge/skew.hpp"

#include <algorithm>
#include <cmath>

namespace dforge {

RevuzDensity RevuzDensity::zero() {
    RevuzDensity f;
    f.kind_ = Kind::Zero;
    f.label_ = "zero";
    return f;
}

RevuzDensity RevuzDensity::constant(double c) {
    if (!(c > 0)) throw ParamError("constant Revuz density must be positive");
    RevuzDensity f;
    f.kind_ = Kind::Constant;
    f.coeff_ = c;
    f.label_ = "constant";
    return f;
}

RevuzDensity RevuzDensity::inverse_square(double c) {
    if (!(c > 0)) throw ParamError("inverse-square coefficient must be positive");
    RevuzDensity f;
    f.kind_ = Kind::InverseSquare;
    f.coeff_ = c;
    f.label_ = "inverse_square";
    return f;
}

RevuzDensity RevuzDensity::custom(std::function<double(double)> f, std::string label) {
    RevuzDensity r;
    r.kind_ = Kind::Custom;
    r.f_ = std::move(f);
    r.coeff_ = 1.0;
    r.label_ = std::move(label);
    return r;
}

double RevuzDensity::value(double x) const {
    switch (kind_) {
    case Kind::Zero:
        return 0.0;
    case Kind::Constant:
        return coeff_;
    case Kind::InverseSquare:
        return coeff_ / (x * x);
    case Kind::Custom:
        return f_(x);
    }
    return 0.0;
}

std::optional<double> RevuzDensity::proportionality(const RevuzDensity& other) const {
    if (kind_ == Kind::Custom || other.kind_ == Kind::Custom) return std::nullopt;
    if (kind_ == Kind::Zero || other.kind_ == Kind::Zero) return std::nullopt;
    if (kind_ != other.kind_) return std::nullopt;
    return other.coeff_ / coeff_;
}

double RadialBump::value(double r) const {
    if (kind == Kind::Zero || r <= a || r >= b) return 0.0;
    if (kind == Kind::Quartic) {
        const double u = (r - a) * (b - r);
        return u * u;
    }
    return std::exp(-1.0 / ((r - a) * (b - r)));
}

double RadialBump::derivative(double r) const {
    if (kind == Kind::Zero || r <= a || r >= b) return 0.0;
    if (kind == Kind::Quartic) {
        const double u = (r - a) * (b - r);
        const double du = (b - r) - (r - a);
        return 2.0 * u * du;
    }
    const double s = (r - a) * (b - r);
    const double ds = (b - r) - (r - a);
    return value(r) * ds / (s * s);
}

double AngularPart::l2_norm_sq(int d) const {
    const double area = sphere_area(d);
    switch (kind) {
    case Kind::Constant:
        return c * c * area;
    case Kind::Coordinate:
        return area / d;
    case Kind::CoordinateProduct:
        return area / (static_cast<double>(d) * (d + 2));
    }
    return 0.0;
}

double AngularPart::eigenvalue(int d) const {
    switch (kind) {
    case Kind::Constant:
        return 0.0;
    case Kind::Coordinate:
        return static_cast<double>(d) - 1.0; // l=1: l(l+d-2)
    case Kind::CoordinateProduct:
        return 2.0 * d; // l=2: 2(2+d-2)
    }
    return 0.0;
}

double AngularPart::value(const std::vector<double>& theta) const {
    switch (kind) {
    case Kind::Constant:
        return c;
    case Kind::Coordinate:
        return theta[static_cast<std::size_t>(i)];
    case Kind::CoordinateProduct:
        return theta[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(j)];
    }
    return 0.0;
}

double energy_tensor(const SkewProductSpec& spec, const TensorTestFunction& u) {
    spec.validate();
    const RadialBump& u1 = u.radial;
    if (u1.kind != RadialBump::Kind::Zero &&
        !(spec.radial.interval.lo < u1.a && u1.b < spec.radial.interval.hi))
        throw DomainError("radial part must be compactly supported inside the interval");
    if (u.angular.kind != AngularPart::Kind::Constant) {
        if (u.angular.i < 0 || u.angular.i >= spec.d || u.angular.j < 0 || u.angular.j >= spec.d)
            throw DomainError("angular coordinate index outside dimension");
        if (u.angular.kind == AngularPart::Kind::CoordinateProduct && u.angular.i == u.angular.j)
            throw DomainError("coordinate product needs distinct indices");
    }
    if (u1.kind == RadialBump::Kind::Zero) return 0.0;

    const double norm_sq = u.angular.l2_norm_sq(spec.d);
    const double lambda = u.angular.eigenvalue(spec.d);
    const auto& l = spec.radial.speed;
    const auto& f = spec.revuz_density;

    const double radial_energy =
        0.5 * integrate([&](double r) {
            const double du = u1.derivative(r);
            return du * du * l.density(r);
        }, u1.a, u1.b, 1e-11);
    double angular_energy = 0.0;
    if (lambda > 0.0) {
        const double mu_mass = integrate([&](double r) {
            const double v = u1.value(r);
            return v * v * f.value(r) * l.density(r);
        }, u1.a, u1.b, 1e-11);
        angular_energy = spec.sphere_time_scale * 0.5 * lambda * norm_sq * mu_mass;
    }
    return radial_energy * norm_sq + angular_energy;
}

namespace {

// the candidate radial scale as a thinning of the base scale
struct ScaleMatch {
    bool proper = false;
};

ScaleMatch match_thinning(const ScaleFunction& candidate, const ScaleFunction& base) {
    if (candidate.same_family(base)) return {false};
    if (candidate.kind() == ScaleFunction::Kind::SelectorThinned) {
        const auto& thinned = static_cast<const ThinnedScale&>(candidate);
        if (thinned.base()->same_family(base))
            return {thinned.selector().complement_lebesgue() > 0.0};
    }
    throw StructuralError("candidate scale is not a thinning of the base scale");
}

} // namespace

CriterionReport check_subspace_criterion(const SkewProductSpec& candidate,
                                         const SkewProductSpec& base) {
    candidate.validate();
    base.validate();
    if (candidate.d != base.d) throw DomainError("subspace criterion requires a common d");

    CriterionReport rep;
    const ScaleMatch scale_match = match_thinning(*candidate.radial.scale, *base.radial.scale);

    // speed measures must coincide: symbolic for catalogued kinds, else grid
    const auto& lc = candidate.radial.speed;
    const auto& lb = base.radial.speed;
    bool speeds_equal;
    if (lc.has_density() && lb.has_density() && lc.kind() == lb.kind() &&
        lc.kind() != SpeedMeasure::Kind::Custom) {
        speeds_equal = lc.symbolically_equal(lb);
        rep.speed_residuals.push_back(speeds_equal ? 0.0 : 1.0);
    } else {
        speeds_equal = true;
        const auto [glo, ghi] = std::pair(std::max(candidate.radial.interval.lo, 1e-2), 1e2);
        for (int k = 0; k < 64; ++k) {
            const double x = glo * std::pow(ghi / glo, (k + 0.5) / 64.0);
            const double a = lc.density(x), b = lb.density(x);
            const double resid = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
            rep.speed_residuals.push_back(resid);
            if (resid > 1e-8) speeds_equal = false;
        }
    }
    if (!speeds_equal) {
        rep.is_subspace = false;
        rep.note = "speed measures differ";
        return rep;
    }

    // Revuz measures proportional: recover c with candidate mu = c * base mu
    std::optional<double> c;
    const auto ck = candidate.revuz_density.kind();
    const auto bk = base.revuz_density.kind();
    if (ck == RevuzDensity::Kind::Zero && bk == RevuzDensity::Kind::Zero) {
        c = 1.0;
    } else if (ck == RevuzDensity::Kind::Zero || bk == RevuzDensity::Kind::Zero) {
        rep.is_subspace = false;
        rep.note = "one Revuz measure vanishes";
        return rep;
    } else if (ck == bk && ck != RevuzDensity::Kind::Custom) {
        c = candidate.revuz_density.coeff() / base.revuz_density.coeff();
        rep.revuz_ratio_residuals.push_back(0.0);
    }
    if (!c) {
        {
            // grid ratio constancy
            const double glo = std::max(candidate.radial.interval.lo, 1e-2), ghi = 1e2;
            double c0 = 0.0;
            bool constant = true;
            for (int k = 0; k < 64; ++k) {
                const double x = glo * std::pow(ghi / glo, (k + 0.5) / 64.0);
                const double fb = base.revuz_density.value(x);
                const double fc = candidate.revuz_density.value(x);
                if (fb <= 0 || fc <= 0) { constant = false; break; }
                const double ratio = fc / fb;
                if (k == 0) c0 = ratio;
                rep.revuz_ratio_residuals.push_back(std::abs(ratio - c0) /
                                                    std::max(std::abs(c0), 1e-300));
                if (std::abs(ratio - c0) > 1e-9 * std::max(1.0, std::abs(c0))) constant = false;
            }
            if (!constant) {
                rep.is_subspace = false;
                rep.note = "Revuz measures not proportional";
                return rep;
            }
            c = c0;
        }
    }

    // the angular clock rate must carry the matching 1/c
    const double expected_rate = base.sphere_time_scale / *c;
    if (std::abs(candidate.sphere_time_scale - expected_rate) >
        1e-9 * std::max(1.0, std::abs(expected_rate))) {
        rep.is_subspace = false;
        rep.note = "angular time scale does not match the Revuz constant";
        return rep;
    }

    rep.is_subspace = true;
    rep.c = c;
    rep.proper = scale_match.proper;
    return rep;
}

GlobalProperties classify_skew(const SkewProductSpec& spec) {
    spec.validate();
    GlobalProperties g = classify_global(spec.radial);
    g.irreducible = true;
    return g;
}

SkewProductSpec radial_spec_from_density(const RotInvariantDensity& rho) {
    if (rho.d < 2) throw ParamError("rotationally invariant density needs d >= 2");
    if (!rho.rho_hat) throw ParamError("missing radial profile");
    // local integrability of rho_hat and 1/rho_hat on compacts
    for (double lo : {1e-3, 1e-1, 1.0}) {
        const double hi = lo * 10;
        double m1, m2;
        try {
            m1 = integrate([&](double x) { return rho.rho_hat(x); }, lo, hi, 1e-8);
            m2 = integrate([&](double x) { return 1.0 / rho.rho_hat(x); }, lo, hi, 1e-8);
        } catch (const QuadratureError&) {
            throw IntegrabilityError("radial profile fails local integrability");
        }
        if (!is_finite(m1) || !is_finite(m2) || m1 <= 0 || m2 <= 0)
            throw IntegrabilityError("radial profile fails local integrability");
    }

    const double area = sphere_area(rho.d);
    auto rh = rho.rho_hat;
    const int d = rho.d;
    auto p_density = [rh, area, d](double x) {
        return 1.0 / (area * rh(x) * std::pow(x, d - 1));
    };
    auto l_density = [rh, area, d](double x) { return area * rh(x) * std::pow(x, d - 1); };

    SkewProductSpec spec;
    spec.radial.interval = {0.0, kInf};
    spec.radial.scale = make_integrated_density_scale(p_density, {0.0, kInf}, 1.0,
                                                      "radial:" + rho.label);
    spec.radial.speed = SpeedMeasure::custom(l_density, "radial:" + rho.label);
    spec.d = rho.d;
    spec.revuz_density = RevuzDensity::inverse_square();
    spec.sphere_time_scale = 1.0;
    return spec;
}

SkewPath simulate_skew(const SkewProductSpec& spec, double r0,
                       const std::vector<double>& theta0, const WalkConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (static_cast<int>(theta0.size()) != spec.d) throw ParamError("theta0 dimension mismatch");
    double n2 = 0.0;
    for (double v : theta0) n2 += v * v;
    if (std::abs(n2 - 1.0) > 1e-12) throw ParamError("theta0 must be a unit vector");

    WalkConfig radial_cfg = cfg;
    radial_cfg.record_path = true;
    std::function<double(double)> f = [&](double x) { return spec.revuz_density.value(x); };
    const RadialPath radial = simulate_path(spec.radial, r0, radial_cfg, &f);

    SkewPath path;
    path.d = spec.d;
    path.exit_flag = radial.exit_flag;
    path.times = radial.times;
    path.radius = radial.states;
    path.pcaf = radial.pcaf;

    SphereStepper stepper(spec.d);
    Rng rng(derive_seed(cfg.seed, 2, 0));
    std::vector<double> theta = theta0;
    path.angle.reserve(path.times.size() * static_cast<std::size_t>(spec.d));
    double clock = 0.0;
    const double kappa = spec.sphere_time_scale;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        const double target = kappa * path.pcaf[k];
        if (target > clock) {
            const int substeps =
                std::max(1, static_cast<int>(std::ceil((target - clock) / cfg.sphere_dt)));
            const double dt = (target - clock) / substeps;
            for (int s = 0; s < substeps; ++s) stepper.step(theta, dt, rng);
            clock = target;
        }
        path.angle.insert(path.angle.end(), theta.begin(), theta.end());
    }
    return path;
}

} // namespace dforge
