#include "dforge/diffusion.hpp"

#include <cmath>

namespace dforge {

namespace {

// analytic finite-time rule from the local density exponents dp/dx ~ x^s,
// l-density ~ x^m at the endpoint (extended-real exponents)
bool finite_time_from_exponents_zero(double s, double m) {
    // int_0 l((x,c)) dp(x): l((x,c)) bounded iff m > -1, else ~ x^{m+1}
    if (m > -1.0) return s > -1.0;
    return m + s > -2.0;
}

bool finite_time_from_exponents_inf(double s, double m) {
    if (m < -1.0) return s < -1.0;
    if (std::isinf(s) && s > 0) return false;
    if (std::isinf(m) && m > 0) return std::isinf(s) && s < 0 ? true : false;
    return m + s < -2.0;
}

// numeric Remark-style shell integrand: integral over the shell of l((x,c)) dp(x)
double shell_mass(const DiffusionSpec& spec, EndpointSide side, double c, double a, double b) {
    const ScaleFunction& p = *spec.scale;
    auto lmass = [&](double u, double v) { return spec.speed.mass(u, v); };
    if (p.kind() == ScaleFunction::Kind::SelectorThinned) {
        // Stieltjes midpoint sum against dp~ (verdict-level accuracy)
        const int n = 32;
        double acc = 0.0;
        double prev = p.eval(a);
        for (int i = 1; i <= n; ++i) {
            const double xr = a + (b - a) * i / n;
            const double xm = a + (b - a) * (i - 0.5) / n;
            const double cur = p.eval(xr);
            acc += (side == EndpointSide::Lower ? lmass(xm, c) : lmass(c, xm)) * (cur - prev);
            prev = cur;
        }
        return acc;
    }
    auto f = [&](double x) {
        const double w = side == EndpointSide::Lower ? lmass(x, c) : lmass(c, x);
        return w * p.derivative(x);
    };
    return integrate(f, a, b, 1e-9);
}

} // namespace

double default_reference_point(const DiffusionSpec& spec) {
    const auto& iv = spec.interval;
    if (iv.bounded()) return 0.5 * (iv.lo + iv.hi);
    if (!is_finite(iv.hi)) return iv.lo < 1.0 ? 1.0 : 2.0 * iv.lo;
    return 0.5 * (iv.lo + iv.hi);
}

BoundaryReport classify_endpoint(const DiffusionSpec& spec, EndpointSide side, double c) {
    spec.validate();
    if (!spec.interval.contains(c)) throw DomainError("reference point outside interval");
    const ScaleFunction& p = *spec.scale;
    const double endpoint = side == EndpointSide::Lower ? spec.interval.lo : spec.interval.hi;

    BoundaryReport rep;
    rep.endpoint = side;
    rep.scale_limit = side == EndpointSide::Lower ? p.lower_limit() : p.upper_limit();
    rep.approachable = is_finite(rep.scale_limit);
    rep.verdict_source = p.limits_analytic() ? VerdictSource::Analytic : VerdictSource::Numeric;

    if (!rep.approachable) {
        rep.approachable_finite_time = false;
        return rep;
    }

    // analytic shortcut when both local exponents are known
    std::optional<double> s, m;
    if (side == EndpointSide::Lower && endpoint == 0.0) {
        s = p.density_exponent_at_zero();
        m = spec.speed.exponent_at_zero();
    } else if (side == EndpointSide::Upper && std::isinf(endpoint)) {
        s = p.density_exponent_at_inf();
        m = spec.speed.exponent_at_inf();
    } else if (is_finite(endpoint) && endpoint > 0.0 &&
               p.kind() != ScaleFunction::Kind::SelectorThinned &&
               p.kind() != ScaleFunction::Kind::IntegratedDensity &&
               spec.speed.has_density()) {
        // regular finite endpoint: bounded densities on a bounded stretch
        rep.approachable_finite_time = true;
        return rep;
    }
    if (s && m) {
        rep.approachable_finite_time =
            side == EndpointSide::Lower && endpoint == 0.0
                ? finite_time_from_exponents_zero(*s, *m)
                : finite_time_from_exponents_inf(*s, *m);
        return rep;
    }

    // numeric dyadic shells of int l((x,c)) dp(x)
    rep.verdict_source = VerdictSource::Numeric;
    auto shell = [&](double far, double near) {
        const double a = std::min(far, near), b = std::max(far, near);
        return shell_mass(spec, side, c, a, b);
    };
    TailResult r = shell_test(shell, c, endpoint);
    if (r.verdict == TailVerdict::Inconclusive)
        throw InconclusiveNumeric("finite-time shell test inconclusive");
    rep.approachable_finite_time = r.verdict == TailVerdict::Convergent;
    return rep;
}

GlobalProperties classify_global(const DiffusionSpec& spec) {
    return classify_global(spec, default_reference_point(spec));
}

GlobalProperties classify_global(const DiffusionSpec& spec, double c) {
    const BoundaryReport lo = classify_endpoint(spec, EndpointSide::Lower, c);
    const BoundaryReport hi = classify_endpoint(spec, EndpointSide::Upper, c);
    GlobalProperties g;
    g.irreducible = true;
    g.transient = lo.approachable || hi.approachable;
    g.recurrent = !g.transient;
    g.conservative = !lo.approachable_finite_time && !hi.approachable_finite_time;
    return g;
}

double hitting_probability(const DiffusionSpec& spec, double x, double a, double b) {
    spec.validate();
    if (!(spec.interval.lo < a && a < b && b < spec.interval.hi && a <= x && x <= b))
        throw DomainError("hitting probability requires e0 < a <= x <= b < e1");
    const double pa = spec.scale->eval(a), px = spec.scale->eval(x), pb = spec.scale->eval(b);
    return (px - pa) / (pb - pa);
}

} // namespace dforge
