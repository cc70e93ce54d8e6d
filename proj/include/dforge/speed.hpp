#pragma once

#include "dforge/errors.hpp"
#include "dforge/numerics.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dforge {

/// Speed measure l(dx) = m(x) dx with a positive density, or a bare
/// mass accessor for pushforward measures. Immutable and shareable.
class SpeedMeasure {
public:
    enum class Kind { Power, Exponential, Custom, Accessor };

    /// l(dx) = coeff * x^exponent dx on (0, inf).
    static SpeedMeasure power(double coeff, double exponent);
    /// l(dx) = coeff * e^{rate x} dx.
    static SpeedMeasure exponential(double coeff, double rate);
    /// Density given as a callable; masses by adaptive quadrature.
    static SpeedMeasure custom(std::function<double(double)> density, std::string label);
    /// Measure known only through interval masses (pushforwards).
    static SpeedMeasure accessor(std::function<double(double, double)> mass, std::string label);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    double coeff() const { return coeff_; }
    double param() const { return param_; }

    bool has_density() const { return kind_ != Kind::Accessor; }
    double density(double x) const;

    /// l((x1, x2]); closed form for the catalogued kinds. Improper endpoints
    /// allowed for catalogued kinds (may return +inf).
    double mass(double x1, double x2) const;

    /// Density exponent m with density ~ x^m near 0 / infinity; -inf encodes
    /// super-polynomial decay. nullopt when unknown (custom/accessor).
    std::optional<double> exponent_at_zero() const;
    std::optional<double> exponent_at_inf() const;

    /// Same catalogued kind with parameters equal to 1e-12.
    bool symbolically_equal(const SpeedMeasure& other) const;

private:
    SpeedMeasure() = default;
    Kind kind_ = Kind::Power;
    double coeff_ = 1.0;
    double param_ = 0.0; // exponent or rate
    std::function<double(double)> density_;
    std::function<double(double, double)> mass_;
    std::string label_;
};

} // namespace dforge
