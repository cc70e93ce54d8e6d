#pragma once

#include "dforge/errors.hpp"
#include "dforge/numerics.hpp"
#include "dforge/selector.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace dforge {

/// Strictly increasing continuous scale function on an open interval.
/// Implementations are immutable after construction and safe to share.
class ScaleFunction {
public:
    enum class Kind { Log, Power, NegPower, Exp, Affine, IntegratedDensity, SelectorThinned, Mapped };

    virtual ~ScaleFunction() = default;

    Kind kind() const { return kind_; }
    const Interval& domain() const { return domain_; }

    /// p(x); DomainError outside the open interval.
    virtual double eval(double x) const = 0;

    /// dp/dx at interior x. StructuralError when no pointwise density exists.
    virtual double derivative(double x) const = 0;

    /// Closed-form C^3 family (admissible as a thinning base).
    virtual bool has_smooth_derivatives() const { return false; }
    virtual double second_derivative(double) const {
        throw StructuralError("scale has no closed-form second derivative");
    }
    virtual double third_derivative(double) const {
        throw StructuralError("scale has no closed-form third derivative");
    }

    /// Extended-real limits p(e0+), p(e1-). May run a numeric shell test
    /// (InconclusiveNumeric on failure); limits_analytic() tells which.
    virtual double lower_limit() const = 0;
    virtual double upper_limit() const = 0;
    virtual bool limits_analytic() const { return true; }

    /// Local behaviour of the density dp/dx for boundary classification:
    /// dp/dx ~ x^s near the endpoint; +inf encodes super-polynomial growth.
    /// nullopt when no analytic descriptor is available.
    virtual std::optional<double> density_exponent_at_zero() const { return std::nullopt; }
    virtual std::optional<double> density_exponent_at_inf() const { return std::nullopt; }

    /// Monotone bisection inverse; post |p(x) - y| <= tol * (1 + |y|).
    virtual double invert(double y, double rel_tol = 1e-12) const;

    /// Structural identity (same kind and parameters), used by the subspace criterion.
    virtual bool same_family(const ScaleFunction& other) const = 0;

protected:
    ScaleFunction(Kind kind, Interval domain) : kind_(kind), domain_(domain) {}
    void check_domain(double x) const {
        if (!domain_.contains(x)) throw DomainError("scale argument outside interval");
    }

private:
    Kind kind_;
    Interval domain_;
};

using ScalePtr = std::shared_ptr<const ScaleFunction>;

/// p(x) = log x on (0, inf).
ScalePtr make_log_scale();
/// p(x) = x^alpha on (0, inf), alpha > 0.
ScalePtr make_power_scale(double alpha);
/// p(x) = -x^{-alpha} / alpha on (0, inf), alpha > 0.
ScalePtr make_neg_power_scale(double alpha);
/// p(x) = e^{2 gamma x} / (4 gamma^2) on (0, inf), gamma > 0.
ScalePtr make_exp_scale(double gamma);
/// p(x) = a x + b, a > 0, on the given interval.
ScalePtr make_affine_scale(double a, double b, Interval domain = {0.0, kInf});
/// p(x) = int_{anchor}^x density(t) dt for a positive continuous density.
ScalePtr make_integrated_density_scale(std::function<double(double)> density,
                                       Interval domain, double anchor,
                                       std::string label = "custom");

/// Accessors for the thinned kind.
class ThinnedScale : public ScaleFunction {
public:
    ThinnedScale(ScalePtr base, SubspaceSelector selector, double anchor);

    double eval(double x) const override;
    double derivative(double x) const override; // base' on F; StructuralError on the complement
    double lower_limit() const override;
    double upper_limit() const override;
    bool limits_analytic() const override;
    bool same_family(const ScaleFunction& other) const override;

    const ScalePtr& base() const { return base_; }
    const SubspaceSelector& selector() const { return selector_; }
    double anchor() const { return anchor_; }

    /// dp-mass of gap generations > n (tail of the generation-wise sum).
    /// Requires a window with strictly interior edges.
    double tail_bound_mass(int n) const;

    /// Integral of w over K cap (window_lo, min(x, window_hi)] against Lebesgue,
    /// where K is the selector complement; w2 is an optional curvature (may be null).
    double complement_weighted_prefix(double x, const std::function<double(double)>& w,
                                      const std::function<double(double)>& w2) const;

private:
    double mass_from_ref(double x) const; // dp-mass of F cap (ref, x], signed
    double fside_full(int n, double lo_unit, double tol, int& budget) const;
    double fside_between(double x, double y) const; // F-mass over (x, y], both <= deep_edge_
    double fside_total_below_deep_edge() const;     // may return +inf (divergent)

    ScalePtr base_;
    SubspaceSelector selector_;
    double anchor_;
    std::unique_ptr<CantorWeightPrefix> kprefix_; // svc kind only
    bool touches_lower_ = false; // window starts at the interval endpoint
    double deep_edge_ = 0.0;     // right edge of the near-endpoint region (touching windows)
    int deep_depth_ = 8;
    double ref_ = 0.0;           // reference point of mass_from_ref
    double kp_ref_ = 0.0;        // complement prefix at ref_
    double shift_ = 0.0;         // mass_from_ref(anchor)
};

/// p~ with dp~/dp = 1_F. The Full selector returns the base scale unchanged.
ScalePtr thin_scale(ScalePtr base, const SubspaceSelector& selector,
                    std::optional<double> anchor = std::nullopt);

/// Free-function forms of the two core operations.
inline double eval_scale(const ScaleFunction& p, double x) { return p.eval(x); }
inline double invert_scale(const ScaleFunction& p, double y, double rel_tol = 1e-12) {
    return p.invert(y, rel_tol);
}

} // namespace dforge
