#include "dforge/scale.hpp"

#include <algorithm>
#include <cmath>

namespace dforge {

double ScaleFunction::invert(double y, double rel_tol) const {
    // bracket y inside the range by marching toward the endpoints
    const Interval& dom = domain();
    double lo, hi;
    if (is_finite(dom.lo) && is_finite(dom.hi)) {
        lo = dom.lo + 1e-15 * (dom.hi - dom.lo);
        hi = dom.hi - 1e-15 * (dom.hi - dom.lo);
    } else {
        lo = is_finite(dom.lo) ? dom.lo + 1e-12 : 1e-12;
        hi = is_finite(dom.hi) ? dom.hi - 1e-12 : 1.0;
    }
    if (lo >= hi) throw DomainError("degenerate interval");
    // expand toward endpoints until y is bracketed
    for (int i = 0; i < 1200 && eval(lo) > y; ++i) {
        if (is_finite(dom.lo))
            lo = dom.lo + (lo - dom.lo) * 0.5;
        else
            lo *= 0.5; // dom.lo can only be a finite value >= 0 or the interval is (0,inf)
        if (i == 1199) throw RangeError("invert: value below scale range");
    }
    for (int i = 0; i < 1200 && eval(hi) < y; ++i) {
        if (is_finite(dom.hi))
            hi = dom.hi - (dom.hi - hi) * 0.5;
        else
            hi *= 2.0;
        if (i == 1199) throw RangeError("invert: value above scale range");
    }
    double x = bisect_increasing([this](double t) { return eval(t); }, y, lo, hi, rel_tol);
    if (std::abs(eval(x) - y) > rel_tol * (1.0 + std::abs(y)) * 16)
        throw NonConvergence("invert: residual above tolerance");
    return x;
}

namespace {

class LogScale final : public ScaleFunction {
public:
    LogScale() : ScaleFunction(Kind::Log, {0.0, kInf}) {}
    double eval(double x) const override { check_domain(x); return std::log(x); }
    double derivative(double x) const override { check_domain(x); return 1.0 / x; }
    bool has_smooth_derivatives() const override { return true; }
    double second_derivative(double x) const override { return -1.0 / (x * x); }
    double third_derivative(double x) const override { return 2.0 / (x * x * x); }
    double lower_limit() const override { return -kInf; }
    double upper_limit() const override { return kInf; }
    std::optional<double> density_exponent_at_zero() const override { return -1.0; }
    std::optional<double> density_exponent_at_inf() const override { return -1.0; }
    bool same_family(const ScaleFunction& o) const override { return o.kind() == Kind::Log; }
};

class PowerScale final : public ScaleFunction {
public:
    explicit PowerScale(double alpha) : ScaleFunction(Kind::Power, {0.0, kInf}), alpha_(alpha) {
        if (!(alpha > 0)) throw ParamError("power scale requires alpha > 0");
    }
    double eval(double x) const override { check_domain(x); return std::pow(x, alpha_); }
    double derivative(double x) const override { check_domain(x); return alpha_ * std::pow(x, alpha_ - 1); }
    bool has_smooth_derivatives() const override { return true; }
    double second_derivative(double x) const override {
        return alpha_ * (alpha_ - 1) * std::pow(x, alpha_ - 2);
    }
    double third_derivative(double x) const override {
        return alpha_ * (alpha_ - 1) * (alpha_ - 2) * std::pow(x, alpha_ - 3);
    }
    double lower_limit() const override { return 0.0; }
    double upper_limit() const override { return kInf; }
    std::optional<double> density_exponent_at_zero() const override { return alpha_ - 1; }
    std::optional<double> density_exponent_at_inf() const override { return alpha_ - 1; }
    bool same_family(const ScaleFunction& o) const override {
        return o.kind() == Kind::Power &&
               std::abs(static_cast<const PowerScale&>(o).alpha_ - alpha_) <= 1e-12;
    }
    double alpha() const { return alpha_; }

private:
    double alpha_;
};

class NegPowerScale final : public ScaleFunction {
public:
    explicit NegPowerScale(double alpha)
        : ScaleFunction(Kind::NegPower, {0.0, kInf}), alpha_(alpha) {
        if (!(alpha > 0)) throw ParamError("neg-power scale requires alpha > 0");
    }
    double eval(double x) const override { check_domain(x); return -std::pow(x, -alpha_) / alpha_; }
    double derivative(double x) const override { check_domain(x); return std::pow(x, -alpha_ - 1); }
    bool has_smooth_derivatives() const override { return true; }
    double second_derivative(double x) const override {
        return -(alpha_ + 1) * std::pow(x, -alpha_ - 2);
    }
    double third_derivative(double x) const override {
        return (alpha_ + 1) * (alpha_ + 2) * std::pow(x, -alpha_ - 3);
    }
    double lower_limit() const override { return -kInf; }
    double upper_limit() const override { return 0.0; }
    std::optional<double> density_exponent_at_zero() const override { return -alpha_ - 1; }
    std::optional<double> density_exponent_at_inf() const override { return -alpha_ - 1; }
    bool same_family(const ScaleFunction& o) const override {
        return o.kind() == Kind::NegPower &&
               std::abs(static_cast<const NegPowerScale&>(o).alpha_ - alpha_) <= 1e-12;
    }
    double alpha() const { return alpha_; }

private:
    double alpha_;
};

class ExpScale final : public ScaleFunction {
public:
    explicit ExpScale(double gamma) : ScaleFunction(Kind::Exp, {0.0, kInf}), gamma_(gamma) {
        if (!(gamma > 0)) throw ParamError("exp scale requires gamma > 0");
    }
    double eval(double x) const override {
        check_domain(x);
        return std::exp(2 * gamma_ * x) / (4 * gamma_ * gamma_);
    }
    double derivative(double x) const override {
        check_domain(x);
        return std::exp(2 * gamma_ * x) / (2 * gamma_);
    }
    bool has_smooth_derivatives() const override { return true; }
    double second_derivative(double x) const override { return std::exp(2 * gamma_ * x); }
    double third_derivative(double x) const override {
        return 2 * gamma_ * std::exp(2 * gamma_ * x);
    }
    double lower_limit() const override { return 1.0 / (4 * gamma_ * gamma_); }
    double upper_limit() const override { return kInf; }
    std::optional<double> density_exponent_at_zero() const override { return 0.0; }
    std::optional<double> density_exponent_at_inf() const override { return kInf; }
    bool same_family(const ScaleFunction& o) const override {
        return o.kind() == Kind::Exp &&
               std::abs(static_cast<const ExpScale&>(o).gamma_ - gamma_) <= 1e-12;
    }
    double gamma() const { return gamma_; }

private:
    double gamma_;
};

class AffineScale final : public ScaleFunction {
public:
    AffineScale(double a, double b, Interval dom)
        : ScaleFunction(Kind::Affine, dom), a_(a), b_(b) {
        if (!(a > 0)) throw ParamError("affine scale requires positive slope");
    }
    double eval(double x) const override { check_domain(x); return a_ * x + b_; }
    double derivative(double x) const override { check_domain(x); return a_; }
    bool has_smooth_derivatives() const override { return true; }
    double second_derivative(double) const override { return 0.0; }
    double third_derivative(double) const override { return 0.0; }
    double lower_limit() const override {
        return is_finite(domain().lo) ? a_ * domain().lo + b_ : -kInf;
    }
    double upper_limit() const override {
        return is_finite(domain().hi) ? a_ * domain().hi + b_ : kInf;
    }
    std::optional<double> density_exponent_at_zero() const override { return 0.0; }
    std::optional<double> density_exponent_at_inf() const override { return 0.0; }
    bool same_family(const ScaleFunction& o) const override {
        if (o.kind() != Kind::Affine) return false;
        const auto& other = static_cast<const AffineScale&>(o);
        return std::abs(other.a_ - a_) <= 1e-12 && std::abs(other.b_ - b_) <= 1e-12;
    }
    double slope() const { return a_; }
    double offset() const { return b_; }

private:
    double a_, b_;
};

class IntegratedDensityScale final : public ScaleFunction {
public:
    IntegratedDensityScale(std::function<double(double)> density, Interval dom, double anchor,
                           std::string label)
        : ScaleFunction(Kind::IntegratedDensity, dom), density_(std::move(density)),
          anchor_(anchor), label_(std::move(label)) {
        if (!dom.contains(anchor)) throw ParamError("anchor outside interval");
        cache_[anchor] = 0.0;
    }

    double eval(double x) const override {
        check_domain(x);
        std::lock_guard lock(mu_);
        auto it = cache_.lower_bound(x);
        double x0, v0;
        if (it != cache_.end() && (it == cache_.begin() || it->first - x < x - std::prev(it)->first)) {
            x0 = it->first; v0 = it->second;
        } else {
            --it;
            x0 = it->first; v0 = it->second;
        }
        double v = v0 + integrate(density_, x0, x, 1e-12);
        if (cache_.size() < 4096) cache_.emplace(x, v);
        return v;
    }

    double derivative(double x) const override { check_domain(x); return density_(x); }

    double lower_limit() const override {
        const double c = anchor_;
        auto shell = [&](double far, double near) {
            return integrate(density_, std::min(far, near), std::max(far, near), 1e-10);
        };
        TailResult r = shell_test(shell, c, domain().lo);
        if (r.verdict == TailVerdict::Convergent) return eval_nearby(c) - r.value;
        if (r.verdict == TailVerdict::Divergent) return -kInf;
        throw InconclusiveNumeric("integrated-density scale: lower limit inconclusive");
    }

    double upper_limit() const override {
        const double c = anchor_;
        auto shell = [&](double far, double near) {
            return integrate(density_, std::min(far, near), std::max(far, near), 1e-10);
        };
        TailResult r = shell_test(shell, c, domain().hi);
        if (r.verdict == TailVerdict::Convergent) return eval_nearby(c) + r.value;
        if (r.verdict == TailVerdict::Divergent) return kInf;
        throw InconclusiveNumeric("integrated-density scale: upper limit inconclusive");
    }

    bool limits_analytic() const override { return false; }
    bool same_family(const ScaleFunction& o) const override {
        return o.kind() == Kind::IntegratedDensity &&
               static_cast<const IntegratedDensityScale&>(o).label_ == label_;
    }
    const std::string& label() const { return label_; }

private:
    double eval_nearby(double x) const { return eval(x); }

    std::function<double(double)> density_;
    double anchor_;
    std::string label_;
    mutable std::mutex mu_;
    mutable std::map<double, double> cache_;
};

} // namespace

ScalePtr make_log_scale() { return std::make_shared<LogScale>(); }
ScalePtr make_power_scale(double alpha) { return std::make_shared<PowerScale>(alpha); }
ScalePtr make_neg_power_scale(double alpha) { return std::make_shared<NegPowerScale>(alpha); }
ScalePtr make_exp_scale(double gamma) { return std::make_shared<ExpScale>(gamma); }
ScalePtr make_affine_scale(double a, double b, Interval domain) {
    return std::make_shared<AffineScale>(a, b, domain);
}
ScalePtr make_integrated_density_scale(std::function<double(double)> density, Interval domain,
                                       double anchor, std::string label) {
    return std::make_shared<IntegratedDensityScale>(std::move(density), domain, anchor,
                                                    std::move(label));
}

ThinnedScale::ThinnedScale(ScalePtr base, SubspaceSelector selector, double anchor)
    : ScaleFunction(Kind::SelectorThinned, base->domain()), base_(std::move(base)),
      selector_(std::move(selector)), anchor_(anchor) {
    if (selector_.is_full())
        throw ParamError("thinned scale over a full selector is the base scale");
    if (!base_->has_smooth_derivatives())
        throw StructuralError("thinning requires a closed-form smooth base scale");
    if (!(selector_.window_lo() >= domain().lo && selector_.window_hi() <= domain().hi))
        throw DomainError("selector window not contained in the scale interval");
    if (selector_.kind() == SubspaceSelector::Kind::Svc) {
        const ScaleFunction& b = *base_;
        kprefix_ = std::make_unique<CantorWeightPrefix>(
            selector_.geometry(), [&b](double x) { return b.derivative(x); },
            [&b](double x) { return b.third_derivative(x); });
        touches_lower_ = selector_.window_lo() <= domain().lo;
        if (touches_lower_) {
            // near the endpoint the base density may be singular; deep evaluations
            // switch to direct gap sums relative to this edge
            const auto& g = *selector_.geometry();
            deep_edge_ = g.to_real(g.piece_len(deep_depth_));
        }
    }
    ref_ = touches_lower_ ? deep_edge_ : selector_.window_lo();
    kp_ref_ = kprefix_ ? kprefix_->prefix(ref_) : 0.0;
    if (!domain().contains(anchor_))
        throw DomainError("anchor outside interval");
    shift_ = mass_from_ref(anchor_);
}

double ThinnedScale::mass_from_ref(double x) const {
    const double aw = selector_.window_lo(), bw = selector_.window_hi();
    if (touches_lower_ && x < deep_edge_) return -fside_between(x, deep_edge_);
    const double xc = std::min(std::max(x, aw), bw);
    double m;
    if (selector_.kind() == SubspaceSelector::Kind::Svc) {
        m = base_->eval(xc) - base_->eval(ref_) - (kprefix_->prefix(xc) - kp_ref_);
    } else { // explicit interval family: F cap window = union of the family
        m = 0.0;
        for (auto& [lo, hi] : selector_.family()) {
            if (lo >= xc) break;
            m += base_->eval(std::min(hi, xc)) - base_->eval(lo);
        }
    }
    if (x < aw) m += base_->eval(x) - base_->eval(aw);
    if (x > bw) m += base_->eval(x) - base_->eval(bw);
    return m;
}

double ThinnedScale::eval(double x) const {
    check_domain(x);
    return mass_from_ref(x) - shift_;
}

double ThinnedScale::fside_full(int n, double lo_unit, double tol, int& budget) const {
    // integral of base' over F cap piece(n, lo_unit); the construction is mirror
    // symmetric inside each piece, so the midpoint value converges quickly under
    // splitting even where the density varies by O(1) across the piece
    const auto& g = *selector_.geometry();
    const double w = g.width();
    const double u = g.to_real(lo_unit), v = g.to_real(lo_unit + g.piece_len(n));
    const double gap_leb = g.ratio() * std::ldexp(1.0, -2 * n) * w;
    const double du = base_->derivative(u), dv = base_->derivative(v);
    const double est = 0.5 * (du + dv) * gap_leb;
    const double err = std::abs(du - dv) * gap_leb;
    if (err <= tol || n >= 74 || budget <= 0) return est;
    --budget;
    const double ln1 = g.piece_len(n + 1), gn1 = g.gap_len(n + 1);
    const double glo = g.to_real(lo_unit + ln1), ghi = g.to_real(lo_unit + ln1 + gn1);
    return fside_full(n + 1, lo_unit, 0.5 * tol, budget) +
           (base_->eval(ghi) - base_->eval(glo)) +
           fside_full(n + 1, lo_unit + ln1 + gn1, 0.5 * tol, budget);
}

double ThinnedScale::fside_between(double x, double y) const {
    // F-mass over (x, y] inside the near-endpoint piece [0, deep_edge]
    const auto& g = *selector_.geometry();
    const double xu = x <= domain().lo ? 0.0 : g.to_unit(x);
    const double yu = g.to_unit(y);
    int budget = 1 << 16;

    // mass of F cap piece(n, lo) cap (xu, yu]
    std::function<double(int, double)> clip = [&](int n, double lo) -> double {
        const double phi = lo + g.piece_len(n);
        if (yu <= lo || xu >= phi) return 0.0;
        if (xu <= lo && yu >= phi) return fside_full(n, lo, 1e-14, budget);
        if (n >= 74) return 0.0; // below resolution, F-part vanishes with the piece
        const double ln1 = g.piece_len(n + 1), gn1 = g.gap_len(n + 1);
        const double glo = lo + ln1, ghi = lo + ln1 + gn1;
        double m = 0.0;
        const double clo = std::max(glo, xu), chi = std::min(ghi, yu);
        if (clo < chi) m += base_->eval(g.to_real(chi)) - base_->eval(g.to_real(clo));
        m += clip(n + 1, lo);
        m += clip(n + 1, ghi);
        return m;
    };
    return clip(deep_depth_, 0.0);
}

double ThinnedScale::fside_total_below_deep_edge() const {
    // total F-mass over (e0, deep_edge]; +inf when the gap masses fail to decay
    const auto& g = *selector_.geometry();
    double acc = 0.0;
    double lo = 0.0;
    int budget = 1 << 16;
    std::vector<double> level_mass;
    for (int n = deep_depth_; n < 74; ++n) {
        const double ln1 = g.piece_len(n + 1), gn1 = g.gap_len(n + 1);
        const double gap_lo = lo + ln1, gap_hi = lo + ln1 + gn1;
        double m = base_->eval(g.to_real(gap_hi)) - base_->eval(g.to_real(gap_lo));
        m += fside_full(n + 1, gap_hi, 1e-14, budget); // right sibling subtree
        acc += m;
        level_mass.push_back(m);
        // non-decaying level masses certify divergence
        if (level_mass.size() >= 12) {
            const std::size_t k = level_mass.size();
            if (level_mass[k - 1] >= 0.8 * level_mass[k - 11] && acc > 1e3) return kInf;
            if (acc > 1e12) return kInf;
        }
        // convergence: geometric tail below tolerance
        if (level_mass.size() >= 4) {
            const std::size_t k = level_mass.size();
            const double r = level_mass[k - 1] / std::max(level_mass[k - 2], 1e-300);
            if (r < 0.9 && level_mass[k - 1] * r / (1 - r) < 1e-12) return acc;
        }
        // descend the leftmost chain
        if (g.piece_len(n + 1) < 1e-17) break;
    }
    throw InconclusiveNumeric("thinned scale: near-endpoint mass neither converges nor diverges");
}

double ThinnedScale::derivative(double x) const {
    check_domain(x);
    if (selector_.in_complement(x))
        throw StructuralError("thinned scale has no density on the selector complement");
    return base_->derivative(x);
}

double ThinnedScale::lower_limit() const {
    const double e0 = domain().lo;
    if (selector_.window_lo() > e0) {
        // the lower exterior carries full dp-mass
        double bl = base_->lower_limit();
        if (!is_finite(bl)) return -kInf;
        return eval(selector_.window_lo()) - (base_->eval(selector_.window_lo()) - bl);
    }
    // window touches the endpoint: sum the gap masses toward it
    const double below = fside_total_below_deep_edge();
    if (!is_finite(below)) return -kInf;
    return eval(deep_edge_) - below;
}

double ThinnedScale::upper_limit() const {
    const double e1 = domain().hi;
    if (selector_.window_hi() < e1) {
        double bu = base_->upper_limit();
        if (!is_finite(bu)) return kInf;
        return eval(selector_.window_hi()) + (bu - base_->eval(selector_.window_hi()));
    }
    const double c = 0.5 * (selector_.window_lo() + selector_.window_hi());
    auto shell = [&](double far, double near) {
        double a = std::min(far, near), b = std::max(far, near);
        return eval(b) - eval(a);
    };
    TailResult r = shell_test(shell, c, e1);
    if (r.verdict == TailVerdict::Convergent) return eval(c) + r.value;
    if (r.verdict == TailVerdict::Divergent) return kInf;
    throw InconclusiveNumeric("thinned scale: upper limit inconclusive");
}

bool ThinnedScale::limits_analytic() const {
    return selector_.window_lo() > domain().lo && selector_.window_hi() < domain().hi &&
           base_->limits_analytic();
}

bool ThinnedScale::same_family(const ScaleFunction& o) const {
    if (o.kind() != Kind::SelectorThinned) return false;
    const auto& other = static_cast<const ThinnedScale&>(o);
    if (!base_->same_family(*other.base_)) return false;
    const auto& s1 = selector_;
    const auto& s2 = other.selector_;
    return s1.kind() == s2.kind() && std::abs(s1.window_lo() - s2.window_lo()) <= 1e-12 &&
           std::abs(s1.window_hi() - s2.window_hi()) <= 1e-12 &&
           std::abs(s1.ratio() - s2.ratio()) <= 1e-12;
}

double ThinnedScale::tail_bound_mass(int n) const {
    if (touches_lower_)
        throw DomainError("tail bound requires a window with interior edges");
    // dp-mass of gaps deeper than n <= sup_{window} p' * Lebesgue tail;
    // catalogue densities are monotone, so the sup sits at a window edge
    const double aw = selector_.window_lo(), bw = selector_.window_hi();
    const double sup = std::max(base_->derivative(aw), base_->derivative(bw));
    return sup * selector_.tail_bound_lebesgue(n);
}

double ThinnedScale::complement_weighted_prefix(double x, const std::function<double(double)>& w,
                                                const std::function<double(double)>& w2) const {
    if (selector_.kind() == SubspaceSelector::Kind::Svc) {
        CantorWeightPrefix pre(selector_.geometry(), w, w2);
        return pre.prefix(x);
    }
    // explicit intervals: complement = window minus family
    const double aw = selector_.window_lo(), bw = selector_.window_hi();
    if (x <= aw) return 0.0;
    const double xx = std::min(x, bw);
    double total = integrate(w, aw, xx, 1e-11);
    for (auto& [lo, hi] : selector_.family()) {
        if (lo >= xx) break;
        total -= integrate(w, lo, std::min(hi, xx), 1e-11);
    }
    return total;
}

ScalePtr thin_scale(ScalePtr base, const SubspaceSelector& selector,
                    std::optional<double> anchor) {
    if (selector.is_full()) return base;
    const double a = anchor.value_or(selector.window_lo());
    return std::make_shared<ThinnedScale>(std::move(base), selector, a);
}

} // namespace dforge
