#include "dforge/speed.hpp"

#include <cmath>

namespace dforge {

SpeedMeasure SpeedMeasure::power(double coeff, double exponent) {
    if (!(coeff > 0)) throw ParamError("speed density coefficient must be positive");
    SpeedMeasure s;
    s.kind_ = Kind::Power;
    s.coeff_ = coeff;
    s.param_ = exponent;
    s.label_ = "power";
    return s;
}

SpeedMeasure SpeedMeasure::exponential(double coeff, double rate) {
    if (!(coeff > 0)) throw ParamError("speed density coefficient must be positive");
    SpeedMeasure s;
    s.kind_ = Kind::Exponential;
    s.coeff_ = coeff;
    s.param_ = rate;
    s.label_ = "exp";
    return s;
}

SpeedMeasure SpeedMeasure::custom(std::function<double(double)> density, std::string label) {
    SpeedMeasure s;
    s.kind_ = Kind::Custom;
    s.density_ = std::move(density);
    s.label_ = std::move(label);
    return s;
}

SpeedMeasure SpeedMeasure::accessor(std::function<double(double, double)> mass,
                                    std::string label) {
    SpeedMeasure s;
    s.kind_ = Kind::Accessor;
    s.mass_ = std::move(mass);
    s.label_ = std::move(label);
    return s;
}

double SpeedMeasure::density(double x) const {
    switch (kind_) {
    case Kind::Power:
        return coeff_ * std::pow(x, param_);
    case Kind::Exponential:
        return coeff_ * std::exp(param_ * x);
    case Kind::Custom:
        return density_(x);
    case Kind::Accessor:
        throw StructuralError("speed measure has no pointwise density");
    }
    return 0.0;
}

double SpeedMeasure::mass(double x1, double x2) const {
    if (x2 < x1) throw DomainError("speed mass requires x1 <= x2");
    switch (kind_) {
    case Kind::Power: {
        const double k = param_;
        if (std::abs(k + 1.0) < 1e-14) {
            if (x1 <= 0.0) return kInf;
            return coeff_ * std::log(x2 / x1);
        }
        auto prim = [&](double x) {
            if (std::isinf(x)) return k + 1.0 > 0 ? kInf : 0.0;
            if (x == 0.0) return k + 1.0 > 0 ? 0.0 : kInf;
            return std::pow(x, k + 1.0) / (k + 1.0);
        };
        return coeff_ * (prim(x2) - prim(x1));
    }
    case Kind::Exponential: {
        const double r = param_;
        auto prim = [&](double x) {
            if (std::isinf(x)) return r > 0 ? kInf : 0.0;
            return std::exp(r * x) / r;
        };
        return coeff_ * (prim(x2) - prim(x1));
    }
    case Kind::Custom: {
        if (x1 == x2) return 0.0;
        if (std::isinf(x2)) {
            double anchor = is_finite(x1) && x1 > 0 ? 2 * x1 : 1.0;
            return integrate(density_, x1, anchor, 1e-11) +
                   integrate_to_endpoint(density_, anchor, kInf);
        }
        if (x1 <= 0.0)
            return integrate_to_endpoint(density_, x2, 0.0);
        return integrate(density_, x1, x2, 1e-11);
    }
    case Kind::Accessor:
        return mass_(x1, x2);
    }
    return 0.0;
}

std::optional<double> SpeedMeasure::exponent_at_zero() const {
    switch (kind_) {
    case Kind::Power:
        return param_;
    case Kind::Exponential:
        return 0.0;
    default:
        return std::nullopt;
    }
}

std::optional<double> SpeedMeasure::exponent_at_inf() const {
    switch (kind_) {
    case Kind::Power:
        return param_;
    case Kind::Exponential:
        return param_ < 0 ? -kInf : kInf;
    default:
        return std::nullopt;
    }
}

bool SpeedMeasure::symbolically_equal(const SpeedMeasure& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
    case Kind::Power:
    case Kind::Exponential:
        return std::abs(coeff_ - other.coeff_) <= 1e-12 * std::max(1.0, std::abs(coeff_)) &&
               std::abs(param_ - other.param_) <= 1e-12 * std::max(1.0, std::abs(param_));
    default:
        return false;
    }
}

} // namespace dforge
